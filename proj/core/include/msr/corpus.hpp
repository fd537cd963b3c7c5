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

#ifndef MSR_CORPUS_HPP_
#define MSR_CORPUS_HPP_

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace msr {

// Which side of a model's training cutoff a document falls on.
enum class Cohort { kPre, kPost };

std::string_view to_string(Cohort cohort);
// Parses "pre" or "post"; anything else yields nullopt.
std::optional<Cohort> parse_cohort(std::string_view text);

struct Document {
  std::string id;
  Cohort cohort = Cohort::kPre;
  std::string source;
  std::string text;
  std::optional<std::chrono::year_month_day> published_at;
};

// Half-open byte range [start, end) into a document's text.
struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  friend bool operator==(const CharSpan&, const CharSpan&) = default;
};

struct Token {
  std::string text;
  CharSpan span;

  friend bool operator==(const Token&, const Token&) = default;
};

// A document together with its word tokens. The source text is shared so
// truncated views stay cheap and can still render original character slices.
struct TokenizedDocument {
  std::string id;
  Cohort cohort = Cohort::kPre;
  std::shared_ptr<const std::string> text;
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
};

// Splits text into maximal runs of non-whitespace. Whitespace is any Unicode
// White_Space code point (ASCII controls, NBSP, U+2000..U+200A, U+3000, ...).
// Case and punctuation are kept as-is. Invalid UTF-8 bytes count as word
// characters.
std::vector<Token> tokenize(std::string_view text);

// Builds the token view of a document. Throws DataError when the text holds
// no tokens.
TokenizedDocument tokenize_document(const Document& doc);

// Reads a line-delimited JSON corpus. Each non-blank line must be an object
// with "id", "text" and "cohort" (optional when cohort_override is set), and
// may carry "source" and "published_at" (YYYY-MM-DD). Throws DataError with
// the offending line number for malformed records, and on duplicate ids.
std::vector<Document> load_corpus(const std::filesystem::path& path,
                                  std::optional<Cohort> cohort_override = {});

// Keeps documents with strictly more than min_words tokens, in order.
std::vector<TokenizedDocument> filter_by_length(
    std::span<const TokenizedDocument> docs, std::size_t min_words);

// First min(max_words, size) tokens; spans refer to the original text.
TokenizedDocument truncate(const TokenizedDocument& doc, std::size_t max_words);

// Token strings of a document, optionally ASCII-lowercased for sensitivity
// runs. Matching is strictly verbatim unless lowercase is requested.
std::vector<std::string> token_strings(std::span<const Token> tokens,
                                       bool lowercase = false);

}  // namespace msr

#endif  // MSR_CORPUS_HPP_
