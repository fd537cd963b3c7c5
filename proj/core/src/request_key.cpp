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

#include <openssl/evp.h>

#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "msr/error.hpp"
#include "msr/llm_gateway.hpp"

namespace msr {
namespace {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0x0F]);
  }
  return out;
}

}  // namespace

std::size_t resolve_max_tokens(const GenerationParams& params,
                               const Transcript& transcript) {
  if (params.max_tokens) return *params.max_tokens;
  const auto words = transcript.reference_tokens.size();
  return std::max<std::size_t>(1, (3 * words + 1) / 2);
}

void validate(const GenerationParams& params) {
  if (!(params.temperature >= 0.0) || !std::isfinite(params.temperature)) {
    throw UsageError("temperature must be a finite value >= 0");
  }
  if (params.max_tokens && *params.max_tokens == 0) {
    throw UsageError("max_tokens must be at least 1");
  }
}

std::string request_key(const Backend& backend, const Transcript& transcript,
                        const GenerationParams& params) {
  nlohmann::json turns = nlohmann::json::array();
  for (const auto& turn : transcript.turns) {
    turns.push_back({{"role", to_string(turn.role)}, {"content", turn.text}});
  }
  nlohmann::json canonical = {
      {"backend", backend.name()},
      {"model", params.model},
      {"temperature", params.temperature},
      {"max_tokens", resolve_max_tokens(params, transcript)},
      {"system", transcript.system_prompt},
      {"turns", std::move(turns)},
      {"reference", transcript.reference_text},
  };
  if (backend.uses_seed()) canonical["seed"] = params.seed;
  return sha256_hex(canonical.dump());
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

}  // namespace msr
