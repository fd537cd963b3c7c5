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

#ifndef MSR_PROMPT_BUILDER_HPP_
#define MSR_PROMPT_BUILDER_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "msr/corpus.hpp"

namespace msr {

inline constexpr std::string_view kDefaultSystemPrompt = "complete the paragraph";
inline constexpr std::size_t kDefaultShots = 6;

// Half-open interval of token indices.
struct TokenRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const TokenRange&, const TokenRange&) = default;
};

// An even split of a document into consecutive non-empty segments. Segment
// lengths differ by at most one, longer segments first.
struct Segmentation {
  std::string doc_id;
  std::size_t token_count = 0;
  std::vector<TokenRange> segments;

  std::size_t shots() const { return segments.size(); }
};

enum class Role { kSystem, kUser, kAssistant };
std::string_view to_string(Role role);

struct Turn {
  Role role = Role::kUser;
  std::string text;

  friend bool operator==(const Turn&, const Turn&) = default;
};

// Faux conversation: segments 1..n-1 alternate user/assistant starting and
// ending with a user turn. The final segment is held out as the reference the
// model is asked to reproduce.
struct Transcript {
  std::string doc_id;
  std::string system_prompt;
  std::vector<Turn> turns;
  std::string reference_text;
  std::vector<Token> reference_tokens;
};

// Model output for a transcript, with its word tokens.
struct GeneratedCompletion {
  std::string text;
  std::vector<Token> tokens;

  static GeneratedCompletion from_text(std::string text);
};

// Throws UsageError when shots is odd or < 2, DataError when the document has
// fewer tokens than segments.
Segmentation segment(const TokenizedDocument& doc, std::size_t shots);

// Original character slice from the first token's start to the last token's
// end. Throws DataError for empty or out-of-range ranges.
std::string render_segment(const TokenizedDocument& doc, TokenRange range);

// Throws DataError if seg was not produced from doc.
Transcript build_transcript(const TokenizedDocument& doc, const Segmentation& seg,
                            std::string_view system_prompt = kDefaultSystemPrompt);

// Human-readable dump used by the transcript debug command.
std::string format_transcript(const Transcript& transcript);

}  // namespace msr

#endif  // MSR_PROMPT_BUILDER_HPP_
