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

#include "test_support.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace msr::testing {

std::vector<Document> synthetic_documents(std::size_t count, std::size_t words,
                                          Cohort cohort, std::uint64_t seed,
                                          const std::string& id_prefix) {
  std::mt19937_64 rng(seed);
  std::vector<Document> docs;
  docs.reserve(count);
  for (std::size_t d = 0; d < count; ++d) {
    Document doc;
    doc.id = id_prefix + std::to_string(d);
    doc.cohort = cohort;
    doc.source = "synthetic";
    for (std::size_t w = 0; w < words; ++w) {
      if (w > 0) doc.text.push_back(w % 17 == 0 ? '\n' : ' ');
      doc.text += "w" + std::to_string(rng() % 50000);
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<std::string> random_tokens(std::size_t length, std::size_t alphabet,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> out;
  out.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    out.emplace_back(1, static_cast<char>('a' + rng() % alphabet));
  }
  return out;
}

std::vector<MaximalMatch> brute_force_maximal_matches(const std::vector<std::string>& ref,
                                                      const std::vector<std::string>& gen) {
  std::vector<MaximalMatch> out;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    for (std::size_t j = 0; j < gen.size(); ++j) {
      for (std::size_t k = 1; i + k <= ref.size() && j + k <= gen.size(); ++k) {
        bool equal = true;
        for (std::size_t t = 0; t < k; ++t) equal = equal && ref[i + t] == gen[j + t];
        if (!equal) continue;
        const bool left_blocked = i == 0 || j == 0 || ref[i - 1] != gen[j - 1];
        const bool right_blocked =
            i + k == ref.size() || j + k == gen.size() || ref[i + k] != gen[j + k];
        if (left_blocked && right_blocked) out.push_back({k, i, j});
      }
    }
  }
  return out;
}

long long brute_force_dominance(const std::vector<double>& x, const std::vector<double>& y) {
  long long s = 0;
  for (double a : x) {
    for (double b : y) s += (a > b) - (a < b);
  }
  return s;
}

double brute_force_ks(const std::vector<double>& x, const std::vector<double>& y) {
  auto ecdf = [](const std::vector<double>& s, double t) {
    double c = 0;
    for (double v : s) c += v <= t ? 1.0 : 0.0;
    return c / static_cast<double>(s.size());
  };
  double best = 0.0;
  for (const auto* sample : {&x, &y}) {
    for (double t : *sample) best = std::max(best, std::fabs(ecdf(x, t) - ecdf(y, t)));
  }
  return best;
}

double rank_by_hand_kruskal_h(const std::vector<std::vector<double>>& groups) {
  std::vector<double> all;
  for (const auto& g : groups) all.insert(all.end(), g.begin(), g.end());
  const double n = static_cast<double>(all.size());
  auto rank_of = [&](double v) {
    double less = 0;
    double equal = 0;
    for (double u : all) {
      less += u < v ? 1 : 0;
      equal += u == v ? 1 : 0;
    }
    return less + (equal + 1.0) / 2.0;
  };
  double sum = 0.0;
  for (const auto& g : groups) {
    double r = 0.0;
    for (double v : g) r += rank_of(v);
    sum += r * r / static_cast<double>(g.size());
  }
  const double h = 12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0);
  // Tie groups: count each distinct value once.
  double ties = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    bool first = true;
    for (std::size_t j = 0; j < i; ++j) first = first && all[j] != all[i];
    if (!first) continue;
    double t = 0;
    for (double u : all) t += u == all[i] ? 1 : 0;
    ties += t * t * t - t;
  }
  const double correction = 1.0 - ties / (n * n * n - n);
  return correction > 0 ? h / correction : 0.0;
}

double closed_form_chi2_sf(double x, int df) {
  const double half = x / 2.0;
  double a = df % 2 == 1 ? 0.5 : 1.0;
  double q = df % 2 == 1 ? std::erfc(std::sqrt(half)) : std::exp(-half);
  // Q(a + 1, x) = Q(a, x) + x^a e^{-x} / Gamma(a + 1)
  while (a < df / 2.0) {
    q += std::exp(a * std::log(half) - half - std::lgamma(a + 1.0));
    a += 1.0;
  }
  return q;
}

}  // namespace msr::testing
