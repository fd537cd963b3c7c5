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

#include "msr/match_kernel.hpp"

#include <algorithm>
#include <string_view>
#include <tuple>
#include <unordered_map>

#include "msr/error.hpp"

namespace msr {
namespace {

// Maps both sequences onto dense integer ids so the scan compares ints.
std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> intern(
    std::span<const std::string> ref, std::span<const std::string> gen) {
  std::unordered_map<std::string_view, std::uint32_t> ids;
  ids.reserve(ref.size() + gen.size());
  auto id_of = [&](const std::string& s) {
    auto [it, inserted] = ids.try_emplace(s, static_cast<std::uint32_t>(ids.size()));
    return it->second;
  };
  std::vector<std::uint32_t> a;
  std::vector<std::uint32_t> b;
  a.reserve(ref.size());
  b.reserve(gen.size());
  for (const auto& s : ref) a.push_back(id_of(s));
  for (const auto& s : gen) b.push_back(id_of(s));
  return {std::move(a), std::move(b)};
}

}  // namespace

std::vector<MaximalMatch> maximal_common_substrings(
    std::span<const std::string> ref, std::span<const std::string> gen) {
  std::vector<MaximalMatch> out;
  if (ref.empty() || gen.empty()) return out;
  const auto [a, b] = intern(ref, gen);
  const std::size_t n = a.size();
  const std::size_t m = b.size();

  // Diagonal d pairs a[i] with b[i + d - (n - 1)]; walk each one and emit a
  // match whenever a run of equal tokens ends.
  for (std::size_t d = 0; d + 1 < n + m; ++d) {
    std::size_t i = d < n ? n - 1 - d : 0;
    std::size_t j = d < n ? 0 : d - (n - 1);
    std::size_t run = 0;
    for (; i < n && j < m; ++i, ++j) {
      if (a[i] == b[j]) {
        ++run;
      } else if (run > 0) {
        out.push_back({run, i - run, j - run});
        run = 0;
      }
    }
    if (run > 0) out.push_back({run, i - run, j - run});
  }
  std::sort(out.begin(), out.end(), [](const MaximalMatch& x, const MaximalMatch& y) {
    return std::tie(x.pos_ref, x.pos_gen) < std::tie(y.pos_ref, y.pos_gen);
  });
  return out;
}

std::size_t longest_common_substring_len(std::span<const std::string> ref,
                                         std::span<const std::string> gen) {
  std::size_t best = 0;
  for (const auto& match : maximal_common_substrings(ref, gen)) {
    best = std::max(best, match.length);
  }
  return best;
}

FrequencyArray frequency_array(std::span<const MaximalMatch> matches,
                               std::size_t l_min, std::size_t l_max,
                               CountMode mode) {
  if (l_min < 1 || l_min > l_max) {
    throw UsageError("invalid length thresholds: l_min=" + std::to_string(l_min) +
                     ", l_max=" + std::to_string(l_max));
  }
  FrequencyArray f;
  f.l_min = l_min;
  f.l_max = l_max;
  f.mode = mode;
  f.counts.assign(l_max - l_min + 1, 0);
  for (const auto& match : matches) {
    if (mode == CountMode::kExact) {
      if (match.length >= l_min && match.length <= l_max) {
        ++f.counts[match.length - l_min];
      }
    } else if (match.length >= l_min) {
      const auto top = std::min(match.length, l_max);
      for (std::size_t k = l_min; k <= top; ++k) ++f.counts[k - l_min];
    }
  }
  return f;
}

FrequencyArray sum_arrays(std::span<const FrequencyArray> arrays) {
  if (arrays.empty()) throw UsageError("sum_arrays needs at least one array");
  FrequencyArray total = arrays.front();
  for (const auto& f : arrays.subspan(1)) {
    if (f.l_min != total.l_min || f.l_max != total.l_max || f.mode != total.mode) {
      throw UsageError("cannot sum frequency arrays with different thresholds");
    }
    for (std::size_t i = 0; i < total.counts.size(); ++i) total.counts[i] += f.counts[i];
  }
  return total;
}

}  // namespace msr
