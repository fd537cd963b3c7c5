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

#ifndef MSR_MATCH_KERNEL_HPP_
#define MSR_MATCH_KERNEL_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace msr {

// A shared word run that cannot be extended left or right at this pair of
// start positions.
struct MaximalMatch {
  std::size_t length = 0;
  std::size_t pos_ref = 0;
  std::size_t pos_gen = 0;

  friend bool operator==(const MaximalMatch&, const MaximalMatch&) = default;
  friend auto operator<=>(const MaximalMatch&, const MaximalMatch&) = default;
};

// How f_k is counted. kAtLeast: matches of length >= k (monotone arrays).
// kExact: matches of length exactly k.
enum class CountMode { kAtLeast, kExact };

struct FrequencyArray {
  std::size_t l_min = 1;
  std::size_t l_max = 1;
  CountMode mode = CountMode::kAtLeast;
  std::vector<std::uint64_t> counts;  // counts[k - l_min] = f_k

  std::uint64_t at(std::size_t k) const { return counts.at(k - l_min); }
  friend bool operator==(const FrequencyArray&, const FrequencyArray&) = default;
};

// Every maximal common run between the two token sequences, sorted by
// (pos_ref, pos_gen). Runs in O(|ref| * |gen|) time and O(|ref| + |gen|)
// extra space by scanning each diagonal once.
std::vector<MaximalMatch> maximal_common_substrings(
    std::span<const std::string> ref, std::span<const std::string> gen);

// Length of the longest common word run; 0 when there is none.
std::size_t longest_common_substring_len(std::span<const std::string> ref,
                                         std::span<const std::string> gen);

// Throws UsageError unless 1 <= l_min <= l_max.
FrequencyArray frequency_array(std::span<const MaximalMatch> matches,
                               std::size_t l_min, std::size_t l_max,
                               CountMode mode = CountMode::kAtLeast);

// Element-wise sum. Throws UsageError on an empty input or when the arrays do
// not share thresholds and counting mode.
FrequencyArray sum_arrays(std::span<const FrequencyArray> arrays);

}  // namespace msr

#endif  // MSR_MATCH_KERNEL_HPP_
