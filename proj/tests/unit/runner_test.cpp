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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "msr/error.hpp"
#include "msr/runner.hpp"
#include "test_support.hpp"

namespace msr {
namespace {

std::vector<Document> corpus(std::size_t per_cohort = 10, std::size_t words = 1100) {
  auto docs = testing::synthetic_documents(per_cohort, words, Cohort::kPre, 1, "pre-");
  auto post = testing::synthetic_documents(per_cohort, words, Cohort::kPost, 2, "post-");
  docs.insert(docs.end(), post.begin(), post.end());
  return docs;
}

ExperimentConfig mock_config() {
  ExperimentConfig c;
  c.backend = "verbatim";
  c.post_backend = "oblivious";
  c.model = "mock";
  c.seed = 17;
  return c;
}

std::string without_timestamp(std::string json) {
  const auto pos = json.find("\"generated_at\"");
  const auto end = json.find('\n', pos);
  return json.erase(pos, end - pos);
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path temp_dir(const std::string& stem) {
  return std::filesystem::temp_directory_path() /
         (stem + std::to_string(std::random_device{}()));
}

TEST(Config, EffectiveLMax) {
  ExperimentConfig c;
  EXPECT_EQ(effective_l_max(c), 12u);
  c.truncate = 75;
  EXPECT_EQ(effective_l_max(c), 12u);
  c.truncate = 1000;
  EXPECT_EQ(effective_l_max(c), 166u);
  c.l_max = 12;
  EXPECT_EQ(effective_l_max(c), 12u);
  c.truncate = 24;  // floor(24/6) = 4 < l_min
  EXPECT_THROW(validate(c), UsageError);
  c.truncate = 5;
  EXPECT_THROW(validate(c), UsageError);
  ExperimentConfig odd;
  odd.shots = 5;
  EXPECT_THROW(validate(odd), UsageError);
  ExperimentConfig inverted;
  inverted.l_max = 3;
  EXPECT_THROW(validate(inverted), UsageError);
}

TEST(RunAudit, VerbatimVersusOblivious) {
  const auto docs = corpus();
  const auto config = mock_config();
  const auto report = run_audit(docs, config, make_backends(config));
  EXPECT_EQ(report.l_min, 5u);
  EXPECT_EQ(report.l_max, 12u);
  EXPECT_EQ(report.failures, 0u);
  EXPECT_EQ(report.post.counts, std::vector<std::uint64_t>(8, 0));
  for (auto c : report.pre.counts) EXPECT_GE(c, 10u);
  EXPECT_DOUBLE_EQ(report.comparison.delta, -1.0);
  EXPECT_DOUBLE_EQ(report.comparison.ks, 1.0);
  EXPECT_LT(report.comparison.p_value, 0.01);

  // Self-consistency: aggregates are sums of per-document arrays.
  std::vector<std::uint64_t> pre_sum(8, 0);
  for (const auto& d : report.documents) {
    ASSERT_EQ(d.counts.size(), 8u);
    if (d.cohort == Cohort::kPre) {
      for (std::size_t i = 0; i < 8; ++i) pre_sum[i] += d.counts[i];
      EXPECT_EQ(d.longest_match, d.reference_words);
    } else {
      EXPECT_EQ(d.longest_match, 0u);
    }
  }
  EXPECT_EQ(pre_sum, report.pre.counts);
  const auto recomputed = compare_cohorts(report.pre, report.post);
  EXPECT_EQ(recomputed.delta, report.comparison.delta);
  EXPECT_EQ(recomputed.h_statistic, report.comparison.h_statistic);
}

TEST(RunAudit, OrderIndependent) {
  auto docs = corpus(6);
  const auto config = mock_config();
  const auto a = run_audit(docs, config, make_backends(config));
  std::shuffle(docs.begin(), docs.end(), std::mt19937_64(4));
  const auto b = run_audit(docs, config, make_backends(config));
  EXPECT_EQ(without_timestamp(report_json(a)), without_timestamp(report_json(b)));
}

TEST(RunAudit, WarmCacheReproducesReport) {
  const auto dir = temp_dir("msr_cache_run_");
  std::filesystem::create_directories(dir);
  auto config = mock_config();
  config.backend = "partial:0.5";
  config.post_backend.reset();
  config.cache_path = dir / "cache.jsonl";
  const auto docs = corpus(4);
  const auto cold_backends = make_backends(config);
  const auto cold = run_audit(docs, config, cold_backends);
  EXPECT_EQ(cold_backends.pre->live_requests(), 8u);

  const auto warm_backends = make_backends(config);
  const auto warm = run_audit(docs, config, warm_backends);
  EXPECT_EQ(warm_backends.pre->live_requests(), 0u);
  EXPECT_EQ(without_timestamp(report_json(cold)), without_timestamp(report_json(warm)));
  std::filesystem::remove_all(dir);
}

TEST(RunAudit, EmptyCohortAfterFiltering) {
  auto docs = testing::synthetic_documents(3, 1100, Cohort::kPre, 1, "pre-");
  auto post = testing::synthetic_documents(3, 500, Cohort::kPost, 2, "post-");
  docs.insert(docs.end(), post.begin(), post.end());
  const auto config = mock_config();
  EXPECT_THROW(run_audit(docs, config, make_backends(config)), DataError);
}

class FailingBackend final : public Backend {
 public:
  explicit FailingBackend(std::string only) : only_(std::move(only)) {}
  std::string name() const override { return "failing"; }
  std::string complete(const Transcript& t, const GenerationParams&) override {
    if (only_.empty() || t.doc_id == only_) throw BackendError("down", false, 400);
    return t.reference_text;
  }

 private:
  std::string only_;
};

TEST(RunAudit, AllGenerationsFail) {
  const auto docs = corpus(3);
  AuditBackends backends;
  backends.pre = std::make_shared<Gateway>(std::make_shared<VerbatimBackend>(), nullptr);
  backends.post = std::make_shared<Gateway>(std::make_shared<FailingBackend>(""), nullptr);
  try {
    run_audit(docs, mock_config(), backends);
    FAIL();
  } catch (const BackendError& e) {
    EXPECT_NE(std::string(e.what()).find("empty cohort results"), std::string::npos);
  }
}

TEST(RunAudit, FailuresAreCountedAndExcluded) {
  const auto docs = corpus(3);
  AuditBackends backends;
  backends.pre = std::make_shared<Gateway>(std::make_shared<FailingBackend>("pre-1"), nullptr);
  backends.post = std::make_shared<Gateway>(std::make_shared<ObliviousBackend>(), nullptr);
  const auto report = run_audit(docs, mock_config(), backends);
  EXPECT_EQ(report.failures, 1u);
  std::size_t failed = 0;
  for (const auto& d : report.documents) {
    if (d.failed()) {
      ++failed;
      EXPECT_EQ(d.doc_id, "pre-1");
    }
  }
  EXPECT_EQ(failed, 1u);
  EXPECT_GE(report.pre.counts[0], 2u);
  EXPECT_LE(report.pre.counts[0], 2u + 2u);
}

class ShoutingBackend final : public Backend {
 public:
  std::string name() const override { return "shouting"; }
  std::string complete(const Transcript& t, const GenerationParams&) override {
    std::string s = t.reference_text;
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
  }
};

TEST(RunAudit, LowercaseNormalization) {
  const auto docs = corpus(2);
  AuditBackends backends;
  backends.pre = std::make_shared<Gateway>(std::make_shared<ShoutingBackend>(), nullptr);
  backends.post = std::make_shared<Gateway>(std::make_shared<ObliviousBackend>(), nullptr);
  auto config = mock_config();
  EXPECT_EQ(run_audit(docs, config, backends).pre.counts[0], 0u);
  config.lowercase = true;
  EXPECT_GE(run_audit(docs, config, backends).pre.counts[0], 2u);
}

TEST(Sweeps, Shots) {
  const auto docs = corpus(3);
  const auto config = mock_config();
  const auto backends = make_backends(config);
  const std::size_t values[] = {2, 4, 6, 8};
  const auto points = sweep_shots(docs, config, backends, values);
  ASSERT_EQ(points.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(points[i].value, static_cast<double>(values[i]));
    EXPECT_EQ(points[i].report.config.shots, values[i]);
  }
  const std::size_t six[] = {6};
  const auto single = sweep_shots(docs, config, backends, six);
  EXPECT_EQ(without_timestamp(report_json(single[0].report)),
            without_timestamp(report_json(run_audit(docs, config, backends))));
  const std::size_t odd[] = {4, 3};
  EXPECT_THROW(sweep_shots(docs, config, backends, odd), UsageError);
}

TEST(Sweeps, TemperatureOnMocks) {
  const auto docs = corpus(3);
  const auto config = mock_config();
  const auto backends = make_backends(config);
  const double temps[] = {0.7, 0.1};
  const auto sweep = sweep_temperature(docs, config, backends, temps);
  ASSERT_EQ(sweep.points.size(), 2u);
  EXPECT_EQ(sweep.points[0].report.pre, sweep.points[1].report.pre);
  ASSERT_TRUE(sweep.pairwise.has_value());
  EXPECT_EQ(sweep.pairwise->delta, 0.0);
  const double one[] = {0.1};
  EXPECT_FALSE(sweep_temperature(docs, config, backends, one).pairwise.has_value());
  const double negative[] = {0.1, -0.5};
  EXPECT_THROW(sweep_temperature(docs, config, backends, negative), UsageError);
}

TEST(Sweeps, Length) {
  const auto docs = corpus(3);
  auto config = mock_config();
  const auto backends = make_backends(config);
  const std::size_t lengths[] = {75, 1000};
  const auto points = sweep_length(docs, config, backends, lengths);
  ASSERT_EQ(points.size(), 2u);
  EXPECT_EQ(points[0].report.l_max, 12u);
  EXPECT_EQ(points[0].report.pre.counts.size(), 8u);
  for (const auto& d : points[0].report.documents) EXPECT_EQ(d.reference_words, 12u);
  EXPECT_EQ(points[1].report.l_max, 166u);
  config.l_max = 12;
  EXPECT_EQ(sweep_length(docs, config, backends, lengths)[1].report.l_max, 12u);
  const std::size_t too_short[] = {75, 5};
  EXPECT_THROW(sweep_length(docs, config, backends, too_short), UsageError);
}

TEST(EmitReport, WritesSummaryAndCsv) {
  const auto docs = corpus(3);
  const auto config = mock_config();
  const auto report = run_audit(docs, config, make_backends(config));
  const auto dir = temp_dir("msr_report_");
  emit_report(report, dir);
  const auto csv = read_file(dir / "frequencies.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "k,count_pre,count_post");
  for (std::size_t k = 5; k <= 12; ++k) {
    std::getline(lines, line);
    EXPECT_EQ(line, std::to_string(k) + "," + std::to_string(report.pre.at(k)) + ",0");
  }
  const auto summary = read_file(dir / "summary.json");
  EXPECT_NE(summary.find("\"cliffs_delta\": -1.0"), std::string::npos);

  emit_report(report, dir);
  EXPECT_EQ(read_file(dir / "frequencies.csv"), csv);
  std::filesystem::remove_all(dir);

  auto broken = report;
  broken.post = FrequencyArray{};
  broken.post.counts.clear();
  const auto other = temp_dir("msr_report_empty_");
  EXPECT_THROW(emit_report(broken, other), DataError);
  EXPECT_FALSE(std::filesystem::exists(other));
}

}  // namespace
}  // namespace msr
