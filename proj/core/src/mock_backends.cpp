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

#include <sstream>
#include <cmath>
#include <random>
#include <unordered_set>

#include "msr/error.hpp"
#include "msr/llm_gateway.hpp"

namespace msr {
namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Per-transcript generator: identical (seed, transcript) pairs replay exactly.
std::mt19937_64 rng_for(const Transcript& transcript, std::uint64_t seed) {
  std::uint64_t h = fnv1a(transcript.reference_text);
  h = fnv1a(transcript.doc_id, h);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Draws words like "zqkfmwta" that never occur in the reference.
class SyntheticVocabulary {
 public:
  explicit SyntheticVocabulary(const Transcript& transcript) {
    for (const auto& token : transcript.reference_tokens) reserved_.insert(token.text);
  }

  std::string draw(std::mt19937_64& rng) const {
    for (;;) {
      std::string word = "zq";
      std::uint64_t bits = rng();
      for (int i = 0; i < 8; ++i) {
        word.push_back(static_cast<char>('a' + bits % 26));
        bits /= 26;
      }
      if (!reserved_.contains(word)) return word;
    }
  }

 private:
  std::unordered_set<std::string> reserved_;
};

void append_word(std::string& out, std::string_view word) {
  if (!out.empty()) out.push_back(' ');
  out.append(word);
}

}  // namespace

std::string VerbatimBackend::complete(const Transcript& transcript,
                                      const GenerationParams&) {
  return transcript.reference_text;
}

std::string ObliviousBackend::complete(const Transcript& transcript,
                                       const GenerationParams& params) {
  auto rng = rng_for(transcript, params.seed);
  const SyntheticVocabulary vocab(transcript);
  std::string out;
  for (std::size_t i = 0; i < transcript.reference_tokens.size(); ++i) {
    append_word(out, vocab.draw(rng));
  }
  return out;
}

PartialCopyBackend::PartialCopyBackend(double copy_probability, std::size_t chunk_words)
    : p_(copy_probability), chunk_words_(chunk_words) {
  if (!(p_ >= 0.0 && p_ <= 1.0)) {
    throw UsageError("partial copy probability must lie in [0, 1]");
  }
  if (chunk_words_ == 0) throw UsageError("partial copy chunk size must be positive");
}

std::string PartialCopyBackend::name() const {
  std::ostringstream out;
  out << "partial:" << p_;
  if (chunk_words_ != kDefaultChunkWords) out << "/" << chunk_words_;
  return out.str();
}

std::string PartialCopyBackend::complete(const Transcript& transcript,
                                         const GenerationParams& params) {
  auto rng = rng_for(transcript, params.seed);
  const SyntheticVocabulary vocab(transcript);
  const auto& ref = transcript.reference_tokens;
  std::string out;
  for (std::size_t begin = 0; begin < ref.size(); begin += chunk_words_) {
    const std::size_t end = std::min(begin + chunk_words_, ref.size());
    if (unit(rng) < p_) {
      for (std::size_t i = begin; i < end; ++i) append_word(out, ref[i].text);
      if (end < ref.size()) append_word(out, vocab.draw(rng));
    } else {
      for (std::size_t i = begin; i < end; ++i) append_word(out, vocab.draw(rng));
    }
  }
  return out;
}

std::shared_ptr<Backend> make_backend(std::string_view spec,
                                      const LiveBackendOptions& live) {
  if (spec == "verbatim") return std::make_shared<VerbatimBackend>();
  if (spec == "oblivious") return std::make_shared<ObliviousBackend>();
  if (spec == "live") return std::make_shared<LiveBackend>(live);
  if (spec.starts_with("partial:")) {
    const std::string value(spec.substr(8));
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) {
      throw UsageError("invalid partial copy probability in backend '" +
                       std::string(spec) + "'");
    }
    return std::make_shared<PartialCopyBackend>(p);
  }
  throw UsageError("unknown backend '" + std::string(spec) +
                   "' (expected live, verbatim, oblivious or partial:P)");
}

}  // namespace msr
