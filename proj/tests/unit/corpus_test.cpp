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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "msr/corpus.hpp"
#include "msr/error.hpp"
#include "test_support.hpp"

namespace msr {
namespace {

class TempFile {
 public:
  explicit TempFile(const std::string& content) {
    path_ = std::filesystem::temp_directory_path() /
            ("msr_corpus_" + std::to_string(std::random_device{}()) + ".jsonl");
    std::ofstream(path_) << content;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::vector<std::string> texts(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.text);
  return out;
}

TEST(Tokenize, SplitsOnWhitespaceRunsWithSpans) {
  const auto tokens = tokenize("the cat  sat.");
  ASSERT_EQ(tokens.size(), 3u);
  EXPECT_EQ(texts(tokens), (std::vector<std::string>{"the", "cat", "sat."}));
  EXPECT_EQ(tokens[0].span, (CharSpan{0, 3}));
  EXPECT_EQ(tokens[1].span, (CharSpan{4, 7}));
  EXPECT_EQ(tokens[2].span, (CharSpan{9, 13}));
}

TEST(Tokenize, EmptyInput) { EXPECT_TRUE(tokenize("").empty()); }

TEST(Tokenize, AllWhitespaceKindsSeparate) {
  EXPECT_EQ(texts(tokenize("a\nb\tc")), (std::vector<std::string>{"a", "b", "c"}));
  // NBSP, em space, ideographic space
  EXPECT_EQ(texts(tokenize("a b c　d")),
            (std::vector<std::string>{"a", "b", "c", "d"}));
  // Non-space multibyte characters stay inside words.
  EXPECT_EQ(texts(tokenize("café naïve")),
            (std::vector<std::string>{"café", "naïve"}));
}

TEST(Tokenize, KeepsCaseAndPunctuation) {
  EXPECT_EQ(texts(tokenize("  Hello, World! ")),
            (std::vector<std::string>{"Hello,", "World!"}));
}

TEST(Tokenize, PropertySpansAndIdempotence) {
  std::mt19937_64 rng(7);
  const std::string pieces[] = {"ab", "C", ".", " ", "  ", "\n", "\t", " ", "é", "x"};
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    const int len = static_cast<int>(rng() % 30);
    for (int i = 0; i < len; ++i) text += pieces[rng() % std::size(pieces)];
    const auto tokens = tokenize(text);
    std::size_t prev_end = 0;
    std::string joined;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const auto& t = tokens[i];
      ASSERT_LT(t.span.start, t.span.end);
      if (i > 0) ASSERT_GT(t.span.start, prev_end);
      ASSERT_EQ(text.substr(t.span.start, t.span.size()), t.text);
      prev_end = t.span.end;
      if (i > 0) joined += ' ';
      joined += t.text;
    }
    ASSERT_EQ(texts(tokenize(joined)), texts(tokens));
  }
}

TEST(LoadCorpus, ReadsRecordsInFileOrder) {
  TempFile f(
      R"({"id":"a","cohort":"pre","text":"one two","source":"wikimedia","published_at":"2021-03-04"})"
      "\n"
      R"({"id":"b","cohort":"post","text":"three"})"
      "\n");
  const auto docs = load_corpus(f.path());
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_EQ(docs[0].id, "a");
  EXPECT_EQ(docs[0].cohort, Cohort::kPre);
  EXPECT_EQ(docs[0].source, "wikimedia");
  ASSERT_TRUE(docs[0].published_at.has_value());
  EXPECT_EQ(*docs[0].published_at,
            std::chrono::year_month_day(std::chrono::year{2021}, std::chrono::month{3},
                                        std::chrono::day{4}));
  EXPECT_EQ(docs[1].id, "b");
  EXPECT_EQ(docs[1].cohort, Cohort::kPost);
  EXPECT_FALSE(docs[1].published_at.has_value());
}

TEST(LoadCorpus, EmptyFileIsEmptyCorpus) {
  TempFile f("");
  EXPECT_TRUE(load_corpus(f.path()).empty());
}

TEST(LoadCorpus, MissingTextNamesTheLine) {
  TempFile f(R"({"id":"a","cohort":"pre","text":"ok"})"
             "\n"
             R"({"id":"b","cohort":"pre"})"
             "\n");
  try {
    load_corpus(f.path());
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("text"), std::string::npos) << e.what();
  }
}

TEST(LoadCorpus, RejectsBadRecords) {
  const char* bad[] = {
      "not json",
      R"(["array"])",
      R"({"id":"a","cohort":"middle","text":"x"})",
      R"({"id":"","cohort":"pre","text":"x"})",
      R"({"id":"a","cohort":"pre","text":""})",
      R"({"id":"a","cohort":"pre","text":"   "})",
      R"({"id":"a","cohort":"pre","text":"x","published_at":"2021-13-01"})",
      R"({"id":"a","text":"x"})",
      R"({"id":7,"cohort":"pre","text":"x"})",
  };
  for (const char* line : bad) {
    TempFile f(std::string(line) + "\n");
    EXPECT_THROW(load_corpus(f.path()), DataError) << line;
  }
}

TEST(LoadCorpus, DuplicateIdIsAnError) {
  TempFile f(R"({"id":"a","cohort":"pre","text":"x"})"
             "\n"
             R"({"id":"a","cohort":"pre","text":"y"})"
             "\n");
  EXPECT_THROW(load_corpus(f.path()), DataError);
}

TEST(LoadCorpus, CohortOverride) {
  TempFile f(R"({"id":"a","cohort":"pre","text":"x"})"
             "\n"
             R"({"id":"b","text":"y"})"
             "\n");
  const auto docs = load_corpus(f.path(), Cohort::kPost);
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_EQ(docs[0].cohort, Cohort::kPost);
  EXPECT_EQ(docs[1].cohort, Cohort::kPost);
}

TEST(LoadCorpus, UnreadablePath) {
  EXPECT_THROW(load_corpus("/nonexistent/corpus.jsonl"), DataError);
  EXPECT_THROW(load_corpus(std::filesystem::temp_directory_path()), DataError);
}

TokenizedDocument doc_of_size(std::size_t n, const std::string& id = "d") {
  Document d;
  d.id = id;
  for (std::size_t i = 0; i < n; ++i) d.text += "t" + std::to_string(i) + " ";
  return tokenize_document(d);
}

TEST(FilterByLength, StrictlyGreaterThanThreshold) {
  const std::vector<TokenizedDocument> docs = {doc_of_size(900, "a"), doc_of_size(1001, "b"),
                                               doc_of_size(1500, "c"),
                                               doc_of_size(1000, "d")};
  const auto kept = filter_by_length(docs, 1000);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].id, "b");
  EXPECT_EQ(kept[1].id, "c");
  EXPECT_EQ(filter_by_length(kept, 1000).size(), 2u);  // idempotent
  EXPECT_EQ(filter_by_length(docs, 0).size(), 4u);
  EXPECT_TRUE(filter_by_length(std::vector<TokenizedDocument>{}, 10).empty());
}

TEST(Truncate, KeepsPrefixWithOriginalSpans) {
  const auto doc = doc_of_size(1000);
  const auto cut = truncate(doc, 75);
  ASSERT_EQ(cut.size(), 75u);
  for (std::size_t i = 0; i < cut.size(); ++i) EXPECT_EQ(cut.tokens[i], doc.tokens[i]);
  EXPECT_EQ(cut.text, doc.text);

  const auto small = doc_of_size(50);
  EXPECT_EQ(truncate(small, 75).size(), 50u);
  EXPECT_EQ(truncate(small, 50).tokens, small.tokens);
  EXPECT_THROW(truncate(small, 0), UsageError);
}

TEST(TokenStrings, LowercaseIsOptIn) {
  const auto tokens = tokenize("The CAT");
  EXPECT_EQ(token_strings(tokens), (std::vector<std::string>{"The", "CAT"}));
  EXPECT_EQ(token_strings(tokens, true), (std::vector<std::string>{"the", "cat"}));
}

}  // namespace
}  // namespace msr
