// Copyright 2026 The MSR Audit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "msr/prompt_builder.hpp"

#include <sstream>

#include "msr/error.hpp"

namespace msr {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
  }
  return "user";
}

GeneratedCompletion GeneratedCompletion::from_text(std::string text) {
  GeneratedCompletion out;
  out.tokens = tokenize(text);
  out.text = std::move(text);
  return out;
}

Segmentation segment(const TokenizedDocument& doc, std::size_t shots) {
  if (shots < 2 || shots % 2 != 0) {
    throw UsageError("shot count must be even and at least 2, got " +
                     std::to_string(shots));
  }
  const std::size_t m = doc.size();
  if (m < shots) {
    throw DataError("document '" + doc.id + "' has " + std::to_string(m) +
                    " words, fewer than " + std::to_string(shots) + " segments");
  }
  Segmentation seg;
  seg.doc_id = doc.id;
  seg.token_count = m;
  seg.segments.reserve(shots);
  const std::size_t base = m / shots;
  const std::size_t extra = m % shots;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < shots; ++i) {
    const std::size_t len = base + (i < extra ? 1 : 0);
    seg.segments.push_back({begin, begin + len});
    begin += len;
  }
  return seg;
}

std::string render_segment(const TokenizedDocument& doc, TokenRange range) {
  if (range.begin >= range.end || range.end > doc.size()) {
    throw DataError("token range [" + std::to_string(range.begin) + ", " +
                    std::to_string(range.end) + ") is outside document '" +
                    doc.id + "'");
  }
  const auto start = doc.tokens[range.begin].span.start;
  const auto end = doc.tokens[range.end - 1].span.end;
  return doc.text->substr(start, end - start);
}

Transcript build_transcript(const TokenizedDocument& doc, const Segmentation& seg,
                            std::string_view system_prompt) {
  if (seg.doc_id != doc.id || seg.token_count != doc.size() ||
      seg.segments.size() < 2 || seg.segments.back().end != doc.size()) {
    throw DataError("segmentation does not belong to document '" + doc.id + "'");
  }
  Transcript t;
  t.doc_id = doc.id;
  t.system_prompt = std::string(system_prompt);
  const std::size_t n = seg.segments.size();
  t.turns.reserve(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    // Segment i+1 in one-based numbering: odd ones are user turns.
    t.turns.push_back({i % 2 == 0 ? Role::kUser : Role::kAssistant,
                       render_segment(doc, seg.segments[i])});
  }
  const auto& last = seg.segments.back();
  t.reference_text = render_segment(doc, last);
  t.reference_tokens.assign(doc.tokens.begin() + static_cast<std::ptrdiff_t>(last.begin),
                            doc.tokens.begin() + static_cast<std::ptrdiff_t>(last.end));
  return t;
}

std::string format_transcript(const Transcript& transcript) {
  std::ostringstream out;
  out << "System: " << transcript.system_prompt << '\n';
  for (const auto& turn : transcript.turns) {
    out << (turn.role == Role::kUser ? "User: " : "LLM: ") << turn.text << '\n';
  }
  out << "LLM: <completion requested>\n";
  out << "--- reference (" << transcript.reference_tokens.size() << " words) ---\n";
  out << transcript.reference_text << '\n';
  return out.str();
}

}  // namespace msr
