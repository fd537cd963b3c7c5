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

#include "msr/corpus.hpp"

#include <cstdio>
#include <fstream>
#include <unordered_set>

#include "json.hpp"
#include "msr/error.hpp"

namespace msr {
namespace {

using nlohmann::json;

std::string line_prefix(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

std::optional<std::chrono::year_month_day> parse_date(const std::string& s) {
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  char tail = 0;
  // Accept YYYY-MM-DD, optionally followed by a time part (ISO-8601).
  if (s.size() < 10 ||
      std::sscanf(s.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) < 3) {
    return std::nullopt;
  }
  if (s.size() > 10 && s[10] != 'T' && s[10] != ' ') return std::nullopt;
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                  std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return ymd;
}

const json& required_string(const json& record, const char* field,
                            const std::string& where) {
  auto it = record.find(field);
  if (it == record.end()) {
    throw DataError(where + "missing required field \"" + field + "\"");
  }
  if (!it->is_string()) {
    throw DataError(where + "field \"" + field + "\" must be a string");
  }
  return *it;
}

}  // namespace

std::string_view to_string(Cohort cohort) {
  return cohort == Cohort::kPre ? "pre" : "post";
}

std::optional<Cohort> parse_cohort(std::string_view text) {
  if (text == "pre") return Cohort::kPre;
  if (text == "post") return Cohort::kPost;
  return std::nullopt;
}

std::vector<Document> load_corpus(const std::filesystem::path& path,
                                  std::optional<Cohort> cohort_override) {
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec)) {
    throw DataError("corpus path is a directory: " + path.string());
  }
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file " + path.string());

  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = line_prefix(path, line_no);

    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(where + "malformed JSON: " + e.what());
    }
    if (!record.is_object()) throw DataError(where + "record is not an object");

    Document doc;
    doc.id = required_string(record, "id", where).get<std::string>();
    doc.text = required_string(record, "text", where).get<std::string>();
    if (doc.id.empty()) throw DataError(where + "empty id");
    if (doc.text.empty()) throw DataError(where + "empty text");
    if (tokenize(doc.text).empty()) {
      throw DataError(where + "text contains no words");
    }

    if (record.contains("cohort") || !cohort_override) {
      const auto& c = required_string(record, "cohort", where);
      auto parsed = parse_cohort(c.get<std::string>());
      if (!parsed) {
        throw DataError(where + "cohort must be \"pre\" or \"post\"");
      }
      doc.cohort = *parsed;
    }
    if (cohort_override) doc.cohort = *cohort_override;

    if (auto it = record.find("source"); it != record.end() && !it->is_null()) {
      if (!it->is_string()) throw DataError(where + "field \"source\" must be a string");
      doc.source = it->get<std::string>();
    }
    if (auto it = record.find("published_at");
        it != record.end() && !it->is_null()) {
      if (!it->is_string()) {
        throw DataError(where + "field \"published_at\" must be a string");
      }
      doc.published_at = parse_date(it->get<std::string>());
      if (!doc.published_at) {
        throw DataError(where + "published_at is not an ISO-8601 date");
      }
    }

    if (!seen.insert(doc.id).second) {
      throw DataError(where + "duplicate id '" + doc.id + "'");
    }
    docs.push_back(std::move(doc));
  }
  if (in.bad()) throw DataError("read error on " + path.string());
  return docs;
}

}  // namespace msr
