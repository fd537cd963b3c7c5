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

#ifndef MSR_RUNNER_HPP_
#define MSR_RUNNER_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msr/corpus.hpp"
#include "msr/llm_gateway.hpp"
#include "msr/match_kernel.hpp"
#include "msr/prompt_builder.hpp"
#include "msr/stats.hpp"

namespace msr {

inline constexpr std::size_t kDefaultLMin = 5;
inline constexpr std::size_t kDefaultLMax = 12;
inline constexpr double kDefaultTemperature = 0.1;
inline constexpr std::size_t kDefaultMinWords = 1000;

struct ExperimentConfig {
  std::size_t shots = kDefaultShots;
  std::size_t l_min = kDefaultLMin;
  // Unset: 12, or floor(L / shots) when truncating to L words.
  std::optional<std::size_t> l_max;
  double temperature = kDefaultTemperature;
  std::string backend = "live";
  // Backend for the post cohort; defaults to `backend`.
  std::optional<std::string> post_backend;
  std::string model = "gpt-3.5-turbo-1106";
  std::optional<std::size_t> max_tokens;
  std::optional<std::size_t> truncate;
  std::size_t min_words = kDefaultMinWords;
  std::size_t max_in_flight = 4;
  std::optional<std::filesystem::path> cache_path;
  std::uint64_t seed = 0;
  std::string system_prompt = std::string(kDefaultSystemPrompt);
  bool lowercase = false;
  CountMode count_mode = CountMode::kAtLeast;
};

// Upper length threshold after applying the truncation cap.
std::size_t effective_l_max(const ExperimentConfig& config);

// Throws UsageError when the configuration is inconsistent.
void validate(const ExperimentConfig& config);

// Gateways for each cohort; both may share one backend and cache.
struct AuditBackends {
  std::shared_ptr<Gateway> pre;
  std::shared_ptr<Gateway> post;
};

AuditBackends make_backends(const ExperimentConfig& config,
                            const LiveBackendOptions& live = {},
                            RetryPolicy retry = {});

struct DocumentSummary {
  std::string doc_id;
  Cohort cohort = Cohort::kPre;
  std::size_t reference_words = 0;
  std::size_t generated_words = 0;
  std::size_t longest_match = 0;
  std::vector<std::uint64_t> counts;
  std::optional<std::string> error;

  bool failed() const { return error.has_value(); }
};

struct AuditReport {
  ExperimentConfig config;
  std::size_t l_min = 0;
  std::size_t l_max = 0;
  FrequencyArray pre;
  FrequencyArray post;
  CohortComparison comparison;
  // Sorted by (cohort, id).
  std::vector<DocumentSummary> documents;
  std::size_t failures = 0;
  std::string generated_at;
};

// Runs the full pipeline over both cohorts: tokenize, filter, optionally
// truncate, segment, build the transcript, generate, match and aggregate.
// Failed generations are left out of the sums and counted. Throws DataError
// when a cohort is empty after filtering and BackendError when a cohort has no
// successful generation.
AuditReport run_audit(std::span<const Document> corpus, const ExperimentConfig& config,
                      const AuditBackends& backends);

struct SweepPoint {
  double value = 0.0;
  AuditReport report;
};

std::vector<SweepPoint> sweep_shots(std::span<const Document> corpus,
                                    const ExperimentConfig& config,
                                    const AuditBackends& backends,
                                    std::span<const std::size_t> shot_values);

struct TemperatureSweep {
  std::vector<SweepPoint> points;
  // Only for exactly two temperatures: compare_samples(low, high) over the
  // aggregated pre-cohort arrays, so stronger low-temperature regurgitation
  // gives a positive delta.
  std::optional<CohortComparison> pairwise;
};

TemperatureSweep sweep_temperature(std::span<const Document> corpus,
                                   const ExperimentConfig& config,
                                   const AuditBackends& backends,
                                   std::span<const double> temperatures);

std::vector<SweepPoint> sweep_length(std::span<const Document> corpus,
                                     const ExperimentConfig& config,
                                     const AuditBackends& backends,
                                     std::span<const std::size_t> lengths);

std::string report_json(const AuditReport& report);
// Columns k,count_pre,count_post.
std::string frequencies_csv(const AuditReport& report);
std::string comparison_json(const CohortComparison& comparison);

// Writes summary.json and frequencies.csv into out_dir (created if needed).
// Throws DataError for a report with an empty cohort, before writing.
void emit_report(const AuditReport& report, const std::filesystem::path& out_dir);

}  // namespace msr

#endif  // MSR_RUNNER_HPP_
