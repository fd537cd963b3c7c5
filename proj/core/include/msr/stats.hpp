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

#ifndef MSR_STATS_HPP_
#define MSR_STATS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "msr/match_kernel.hpp"

namespace msr {

struct KruskalWallisResult {
  double h_statistic = 0.0;
  double p_value = 1.0;
};

// Effect size and distribution-distance summary of two samples.
struct CohortComparison {
  double delta = 0.0;        // Cliff's delta, in [-1, 1]
  double ks = 0.0;           // two-sample KS distance, in [0, 1]
  double h_statistic = 0.0;  // Kruskal-Wallis H, tie corrected
  double p_value = 1.0;      // chi-squared upper tail with 1 degree of freedom
  std::size_t n_first = 0;
  std::size_t n_second = 0;
};

// (#{x_i > y_j} - #{x_i < y_j}) / (|x| |y|). Throws UsageError on an empty
// sample.
double cliffs_delta(std::span<const double> x, std::span<const double> y);

// sup_t |ECDF_x(t) - ECDF_y(t)|. Throws UsageError on an empty sample.
double ks_distance(std::span<const double> x, std::span<const double> y);

// Kruskal-Wallis H over mid-ranks with the usual tie correction. All-tied
// input gives H = 0, p = 1. Throws UsageError for fewer than two groups, an
// empty group, or fewer than three observations overall.
KruskalWallisResult kruskal_wallis(std::span<const std::vector<double>> groups);

// Regularized upper incomplete gamma Q(a, x), a > 0, x >= 0.
double gamma_q(double a, double x);

// Upper tail of the chi-squared distribution, Q(df/2, value/2).
double chi2_sf(double value, int df);

// Delta, KS and Kruskal-Wallis for two samples, with delta oriented as
// cliffs_delta(first, second).
CohortComparison compare_samples(std::span<const double> first,
                                 std::span<const double> second);

// Compares aggregated pre- and post-cutoff arrays. Delta is computed as
// cliffs_delta(post, pre), so higher pre-cohort counts give a negative value.
CohortComparison compare_cohorts(const FrequencyArray& pre,
                                 const FrequencyArray& post);

std::vector<double> as_sample(const FrequencyArray& f);

}  // namespace msr

#endif  // MSR_STATS_HPP_
