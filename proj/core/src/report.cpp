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

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "msr/error.hpp"
#include "msr/runner.hpp"

namespace msr {
namespace {

using nlohmann::ordered_json;

ordered_json to_json(const CohortComparison& c) {
  return {{"cliffs_delta", c.delta}, {"ks_distance", c.ks},
          {"kw_h_statistic", c.h_statistic}, {"kw_p_value", c.p_value},
          {"n_first", c.n_first}, {"n_second", c.n_second}};
}

ordered_json to_json(const FrequencyArray& f) {
  return {{"l_min", f.l_min}, {"l_max", f.l_max},
          {"mode", f.mode == CountMode::kAtLeast ? "at_least" : "exact"},
          {"counts", f.counts}};
}

ordered_json to_json(const ExperimentConfig& c, std::size_t l_max) {
  ordered_json j = {
      {"shots", c.shots},
      {"l_min", c.l_min},
      {"l_max", l_max},
      {"temperature", c.temperature},
      {"backend", c.backend},
      {"post_backend", c.post_backend.value_or(c.backend)},
      {"model", c.model},
      {"max_tokens", c.max_tokens ? ordered_json(*c.max_tokens) : ordered_json()},
      {"truncate", c.truncate ? ordered_json(*c.truncate) : ordered_json()},
      {"min_words", c.min_words},
      {"seed", c.seed},
      {"system_prompt", c.system_prompt},
      {"lowercase", c.lowercase},
      {"count_mode", c.count_mode == CountMode::kAtLeast ? "at_least" : "exact"},
  };
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.flush();
  if (!out) throw DataError("cannot write " + path.string());
}

}  // namespace

std::string comparison_json(const CohortComparison& comparison) {
  return to_json(comparison).dump();
}

std::string report_json(const AuditReport& report) {
  ordered_json docs = ordered_json::array();
  for (const auto& d : report.documents) {
    ordered_json j = {{"id", d.doc_id},
                      {"cohort", to_string(d.cohort)},
                      {"reference_words", d.reference_words},
                      {"generated_words", d.generated_words},
                      {"longest_match", d.longest_match},
                      {"counts", d.counts}};
    if (d.error) j["error"] = *d.error;
    docs.push_back(std::move(j));
  }
  ordered_json j = {
      {"generated_at", report.generated_at},
      {"config", to_json(report.config, report.l_max)},
      {"pre", to_json(report.pre)},
      {"post", to_json(report.post)},
      {"comparison", to_json(report.comparison)},
      {"failures", report.failures},
      {"documents", std::move(docs)},
  };
  return j.dump(2) + "\n";
}

std::string frequencies_csv(const AuditReport& report) {
  std::ostringstream out;
  out << "k,count_pre,count_post\n";
  for (std::size_t k = report.l_min; k <= report.l_max; ++k) {
    out << k << ',' << report.pre.at(k) << ',' << report.post.at(k) << '\n';
  }
  return out.str();
}

void emit_report(const AuditReport& report, const std::filesystem::path& out_dir) {
  const auto expected = report.l_max - report.l_min + 1;
  if (report.pre.counts.size() != expected || report.post.counts.size() != expected) {
    throw DataError("report has an empty cohort; nothing to write");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw DataError("cannot create output directory " + out_dir.string() + ": " +
                          ec.message());
  write_file(out_dir / "summary.json", report_json(report));
  write_file(out_dir / "frequencies.csv", frequencies_csv(report));
}

}  // namespace msr
