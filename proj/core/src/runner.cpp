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

#include "msr/runner.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "msr/error.hpp"

namespace msr {
namespace {

struct PreparedDocument {
  TokenizedDocument doc;
  Transcript transcript;
};

std::vector<PreparedDocument> prepare(std::span<const Document> corpus,
                                      const ExperimentConfig& config) {
  std::unordered_set<std::string> ids;
  std::vector<TokenizedDocument> tokenized;
  tokenized.reserve(corpus.size());
  for (const auto& doc : corpus) {
    if (!ids.insert(doc.id).second) {
      throw DataError("duplicate document id '" + doc.id + "' across corpus files");
    }
    tokenized.push_back(tokenize_document(doc));
  }
  auto kept = filter_by_length(tokenized, config.min_words);

  std::vector<PreparedDocument> out;
  out.reserve(kept.size());
  for (auto& doc : kept) {
    if (config.truncate) doc = truncate(doc, *config.truncate);
    const auto seg = segment(doc, config.shots);
    auto transcript = build_transcript(doc, seg, config.system_prompt);
    out.push_back({std::move(doc), std::move(transcript)});
  }
  return out;
}

GenerationParams params_for(const ExperimentConfig& config) {
  GenerationParams params;
  params.model = config.model;
  params.temperature = config.temperature;
  params.max_tokens = config.max_tokens;
  params.seed = config.seed;
  return params;
}

DocumentSummary summarize(const PreparedDocument& prepared, const GenerationRecord& record,
                          const ExperimentConfig& config, std::size_t l_max,
                          FrequencyArray& out_array) {
  DocumentSummary summary;
  summary.doc_id = prepared.doc.id;
  summary.cohort = prepared.doc.cohort;
  summary.reference_words = prepared.transcript.reference_tokens.size();
  if (!record.ok()) {
    summary.error = record.error;
    return summary;
  }
  const auto completion = GeneratedCompletion::from_text(record.output_text);
  const auto ref = token_strings(prepared.transcript.reference_tokens, config.lowercase);
  const auto gen = token_strings(completion.tokens, config.lowercase);
  const auto matches = maximal_common_substrings(ref, gen);
  out_array = frequency_array(matches, config.l_min, l_max, config.count_mode);
  summary.generated_words = gen.size();
  for (const auto& m : matches) summary.longest_match = std::max(summary.longest_match, m.length);
  summary.counts = out_array.counts;
  return summary;
}

void validate_shots(std::size_t n) {
  if (n < 2 || n % 2 != 0) {
    throw UsageError("shot count must be even and at least 2, got " + std::to_string(n));
  }
}

}  // namespace

std::size_t effective_l_max(const ExperimentConfig& config) {
  if (config.truncate) {
    const std::size_t cap = config.shots == 0 ? 0 : *config.truncate / config.shots;
    return config.l_max ? std::min(*config.l_max, cap) : cap;
  }
  return config.l_max.value_or(kDefaultLMax);
}

void validate(const ExperimentConfig& config) {
  validate_shots(config.shots);
  if (config.l_min < 1) throw UsageError("l_min must be at least 1");
  if (config.l_max && *config.l_max < config.l_min) {
    throw UsageError("l_max must be >= l_min");
  }
  if (config.truncate && *config.truncate < config.shots) {
    throw UsageError("truncation length " + std::to_string(*config.truncate) +
                     " is shorter than the shot count " + std::to_string(config.shots));
  }
  if (effective_l_max(config) < config.l_min) {
    throw UsageError("truncation cap floor(L/shots) = " +
                     std::to_string(effective_l_max(config)) + " is below l_min = " +
                     std::to_string(config.l_min));
  }
  if (config.max_in_flight < 1) throw UsageError("concurrency must be at least 1");
  validate(params_for(config));
}

AuditBackends make_backends(const ExperimentConfig& config, const LiveBackendOptions& live,
                            RetryPolicy retry) {
  auto cache = config.cache_path ? std::make_shared<ResponseCache>(*config.cache_path)
                                 : std::make_shared<ResponseCache>();
  AuditBackends out;
  out.pre = std::make_shared<Gateway>(make_backend(config.backend, live), cache, retry);
  if (config.post_backend && *config.post_backend != config.backend) {
    out.post = std::make_shared<Gateway>(make_backend(*config.post_backend, live), cache,
                                         std::move(retry));
  } else {
    out.post = out.pre;
  }
  return out;
}

AuditReport run_audit(std::span<const Document> corpus, const ExperimentConfig& config,
                      const AuditBackends& backends) {
  validate(config);
  if (!backends.pre || !backends.post) throw UsageError("run_audit: missing backend");
  const std::size_t l_max = effective_l_max(config);

  auto prepared = prepare(corpus, config);
  std::vector<const PreparedDocument*> cohorts[2];
  for (const auto& p : prepared) {
    cohorts[p.doc.cohort == Cohort::kPre ? 0 : 1].push_back(&p);
  }
  for (int c = 0; c < 2; ++c) {
    if (cohorts[c].empty()) {
      throw DataError(std::string("empty ") + std::string(to_string(c == 0 ? Cohort::kPre : Cohort::kPost)) +
                      " cohort after filtering (min words " +
                      std::to_string(config.min_words) + ")");
    }
  }

  AuditReport report;
  report.config = config;
  report.l_min = config.l_min;
  report.l_max = l_max;
  const auto params = params_for(config);

  FrequencyArray totals[2];
  for (int c = 0; c < 2; ++c) {
    std::vector<Transcript> transcripts;
    transcripts.reserve(cohorts[c].size());
    for (const auto* p : cohorts[c]) transcripts.push_back(p->transcript);
    auto& gateway = c == 0 ? *backends.pre : *backends.post;
    const auto records = gateway.generate_batch(transcripts, params, config.max_in_flight);

    std::vector<FrequencyArray> arrays;
    std::string last_error;
    for (std::size_t i = 0; i < records.size(); ++i) {
      FrequencyArray f;
      auto summary = summarize(*cohorts[c][i], records[i], config, l_max, f);
      if (summary.failed()) {
        ++report.failures;
        last_error = *summary.error;
      } else {
        arrays.push_back(std::move(f));
      }
      report.documents.push_back(std::move(summary));
    }
    if (arrays.empty()) {
      throw BackendError("empty cohort results for " +
                             std::string(to_string(c == 0 ? Cohort::kPre : Cohort::kPost)) +
                             " cohort: every generation failed (last error: " + last_error +
                             ")",
                         false);
    }
    totals[c] = sum_arrays(arrays);
  }
  report.pre = std::move(totals[0]);
  report.post = std::move(totals[1]);
  report.comparison = compare_cohorts(report.pre, report.post);

  std::sort(report.documents.begin(), report.documents.end(),
            [](const DocumentSummary& a, const DocumentSummary& b) {
              if (a.cohort != b.cohort) return a.cohort == Cohort::kPre;
              return a.doc_id < b.doc_id;
            });
  report.generated_at = utc_timestamp();
  return report;
}

std::vector<SweepPoint> sweep_shots(std::span<const Document> corpus,
                                    const ExperimentConfig& config,
                                    const AuditBackends& backends,
                                    std::span<const std::size_t> shot_values) {
  if (shot_values.empty()) throw UsageError("shot sweep needs at least one value");
  for (auto n : shot_values) validate_shots(n);
  std::vector<SweepPoint> out;
  for (auto n : shot_values) {
    auto c = config;
    c.shots = n;
    out.push_back({static_cast<double>(n), run_audit(corpus, c, backends)});
  }
  return out;
}

TemperatureSweep sweep_temperature(std::span<const Document> corpus,
                                   const ExperimentConfig& config,
                                   const AuditBackends& backends,
                                   std::span<const double> temperatures) {
  if (temperatures.empty()) throw UsageError("temperature sweep needs at least one value");
  for (double t : temperatures) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw UsageError("temperature must be a finite value >= 0");
    }
  }
  TemperatureSweep sweep;
  for (double t : temperatures) {
    auto c = config;
    c.temperature = t;
    sweep.points.push_back({t, run_audit(corpus, c, backends)});
  }
  if (sweep.points.size() == 2) {
    const auto& a = sweep.points[0];
    const auto& b = sweep.points[1];
    const auto& low = a.value <= b.value ? a : b;
    const auto& high = a.value <= b.value ? b : a;
    const auto low_counts = as_sample(low.report.pre);
    const auto high_counts = as_sample(high.report.pre);
    sweep.pairwise = compare_samples(low_counts, high_counts);
  }
  return sweep;
}

std::vector<SweepPoint> sweep_length(std::span<const Document> corpus,
                                     const ExperimentConfig& config,
                                     const AuditBackends& backends,
                                     std::span<const std::size_t> lengths) {
  if (lengths.empty()) throw UsageError("length sweep needs at least one value");
  std::vector<ExperimentConfig> configs;
  for (auto length : lengths) {
    auto c = config;
    c.truncate = length;
    validate(c);
    configs.push_back(std::move(c));
  }
  std::vector<SweepPoint> out;
  for (const auto& c : configs) {
    out.push_back({static_cast<double>(*c.truncate), run_audit(corpus, c, backends)});
  }
  return out;
}

}  // namespace msr
