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

#include "msr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "msr/error.hpp"

namespace msr {
namespace {

void require_non_empty(std::span<const double> x, std::span<const double> y,
                       const char* what) {
  if (x.empty() || y.empty()) {
    throw UsageError(std::string(what) + " requires two non-empty samples");
  }
}

std::vector<double> sorted_copy(std::span<const double> x) {
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  return v;
}

// Series expansion of P(a, x); converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 1000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) (modified Lentz); used for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double cliffs_delta(std::span<const double> x, std::span<const double> y) {
  require_non_empty(x, y, "cliffs_delta");
  const auto ys = sorted_copy(y);
  long long greater = 0;
  long long less = 0;
  for (double v : x) {
    const auto lo = std::lower_bound(ys.begin(), ys.end(), v);
    const auto hi = std::upper_bound(lo, ys.end(), v);
    greater += lo - ys.begin();
    less += ys.end() - hi;
  }
  return static_cast<double>(greater - less) /
         (static_cast<double>(x.size()) * static_cast<double>(y.size()));
}

double ks_distance(std::span<const double> x, std::span<const double> y) {
  require_non_empty(x, y, "ks_distance");
  const auto xs = sorted_copy(x);
  const auto ys = sorted_copy(y);
  const double nx = static_cast<double>(xs.size());
  const double ny = static_cast<double>(ys.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0.0;
  // Step both ECDFs past every copy of the next smallest value before
  // measuring the gap, so ties never produce a spurious jump.
  while (i < xs.size() && j < ys.size()) {
    const double t = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] == t) ++i;
    while (j < ys.size() && ys[j] == t) ++j;
    best = std::max(best, std::fabs(static_cast<double>(i) / nx -
                                    static_cast<double>(j) / ny));
  }
  return best;
}

KruskalWallisResult kruskal_wallis(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) throw UsageError("kruskal_wallis needs at least two groups");
  struct Obs {
    double value;
    std::size_t group;
  };
  std::vector<Obs> all;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) throw UsageError("kruskal_wallis: group " +
                                            std::to_string(g) + " is empty");
    for (double v : groups[g]) all.push_back({v, g});
  }
  const std::size_t n = all.size();
  if (n < 3) throw UsageError("kruskal_wallis needs at least three observations");

  std::sort(all.begin(), all.end(),
            [](const Obs& a, const Obs& b) { return a.value < b.value; });
  std::vector<double> rank_sum(groups.size(), 0.0);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && all[j].value == all[i].value) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) rank_sum[all[k].group] += mid_rank;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }

  const double nn = static_cast<double>(n);
  const double correction = 1.0 - tie_term / (nn * nn * nn - nn);
  if (correction <= 0.0) return {0.0, 1.0};

  const double mean_rank = (nn + 1.0) / 2.0;
  double h = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double size = static_cast<double>(groups[g].size());
    const double dev = rank_sum[g] / size - mean_rank;
    h += size * dev * dev;
  }
  h *= 12.0 / (nn * (nn + 1.0));
  h /= correction;
  h = std::max(h, 0.0);
  return {h, chi2_sf(h, static_cast<int>(groups.size()) - 1)};
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    throw UsageError("gamma_q requires a > 0 and x >= 0");
  }
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double chi2_sf(double value, int df) {
  if (df < 1) throw UsageError("chi2_sf: degrees of freedom must be >= 1");
  if (!(value >= 0.0)) throw UsageError("chi2_sf: value must be >= 0");
  return gamma_q(0.5 * df, 0.5 * value);
}

CohortComparison compare_samples(std::span<const double> first,
                                 std::span<const double> second) {
  CohortComparison c;
  c.delta = cliffs_delta(first, second);
  c.ks = ks_distance(first, second);
  const std::vector<double> groups[] = {{first.begin(), first.end()},
                                        {second.begin(), second.end()}};
  const auto kw = kruskal_wallis(groups);
  c.h_statistic = kw.h_statistic;
  c.p_value = kw.p_value;
  c.n_first = first.size();
  c.n_second = second.size();
  return c;
}

std::vector<double> as_sample(const FrequencyArray& f) {
  return {f.counts.begin(), f.counts.end()};
}

CohortComparison compare_cohorts(const FrequencyArray& pre,
                                 const FrequencyArray& post) {
  if (pre.l_min != post.l_min || pre.l_max != post.l_max || pre.mode != post.mode) {
    throw UsageError("compare_cohorts: frequency arrays use different thresholds");
  }
  const auto x = as_sample(post);
  const auto y = as_sample(pre);
  return compare_samples(x, y);
}

}  // namespace msr
