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

#include <algorithm>
#include <cctype>
#include <cstdint>

#include "msr/corpus.hpp"
#include "msr/error.hpp"

namespace msr {
namespace {

bool is_unicode_space(char32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680:
    case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Decodes one code point at text[pos]. Returns the byte length consumed and
// whether that code point is whitespace. Malformed sequences consume a single
// byte and are treated as word characters.
std::pair<std::size_t, bool> next_code_point(std::string_view text,
                                             std::size_t pos) {
  const auto lead = static_cast<unsigned char>(text[pos]);
  if (lead < 0x80) return {1, is_unicode_space(lead)};

  std::size_t len = 0;
  char32_t cp = 0;
  if ((lead & 0xE0) == 0xC0) {
    len = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    cp = lead & 0x07;
  } else {
    return {1, false};
  }
  if (pos + len > text.size()) return {1, false};
  for (std::size_t i = 1; i < len; ++i) {
    const auto cont = static_cast<unsigned char>(text[pos + i]);
    if ((cont & 0xC0) != 0x80) return {1, false};
    cp = (cp << 6) | (cont & 0x3F);
  }
  return {len, is_unicode_space(cp)};
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t pos = 0;
  std::optional<std::size_t> word_start;
  while (pos < text.size()) {
    const auto [len, space] = next_code_point(text, pos);
    if (space) {
      if (word_start) {
        tokens.push_back({std::string(text.substr(*word_start, pos - *word_start)),
                          {*word_start, pos}});
        word_start.reset();
      }
    } else if (!word_start) {
      word_start = pos;
    }
    pos += len;
  }
  if (word_start) {
    tokens.push_back({std::string(text.substr(*word_start)),
                      {*word_start, text.size()}});
  }
  return tokens;
}

TokenizedDocument tokenize_document(const Document& doc) {
  TokenizedDocument out;
  out.id = doc.id;
  out.cohort = doc.cohort;
  out.text = std::make_shared<const std::string>(doc.text);
  out.tokens = tokenize(*out.text);
  if (out.tokens.empty()) {
    throw DataError("document '" + doc.id + "' contains no words");
  }
  return out;
}

std::vector<TokenizedDocument> filter_by_length(
    std::span<const TokenizedDocument> docs, std::size_t min_words) {
  std::vector<TokenizedDocument> kept;
  for (const auto& doc : docs) {
    if (doc.size() > min_words) kept.push_back(doc);
  }
  return kept;
}

TokenizedDocument truncate(const TokenizedDocument& doc, std::size_t max_words) {
  if (max_words == 0) throw UsageError("truncation length must be at least 1");
  TokenizedDocument out;
  out.id = doc.id;
  out.cohort = doc.cohort;
  out.text = doc.text;
  const auto keep = std::min(max_words, doc.tokens.size());
  out.tokens.assign(doc.tokens.begin(), doc.tokens.begin() + static_cast<std::ptrdiff_t>(keep));
  return out;
}

std::vector<std::string> token_strings(std::span<const Token> tokens,
                                       bool lowercase) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& token : tokens) {
    std::string s = token.text;
    if (lowercase) {
      std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
      });
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace msr
