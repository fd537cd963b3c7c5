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

#ifndef MSR_LLM_GATEWAY_HPP_
#define MSR_LLM_GATEWAY_HPP_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "msr/prompt_builder.hpp"

namespace msr {

struct GenerationParams {
  std::string model = "mock";
  double temperature = 0.1;
  // Unset means ceil(1.5 * reference word count), resolved per request.
  std::optional<std::size_t> max_tokens;
  // Only consulted by mock backends.
  std::uint64_t seed = 0;
};

// max_tokens for a given transcript after applying the default rule.
std::size_t resolve_max_tokens(const GenerationParams& params,
                               const Transcript& transcript);

// Throws UsageError for negative temperature or max_tokens == 0.
void validate(const GenerationParams& params);

struct GenerationRecord {
  std::string doc_id;
  std::string request_key;
  std::string output_text;
  std::string backend_name;
  GenerationParams params;
  std::string created_at;  // ISO-8601 UTC
  bool from_cache = false;
  // Set when the request failed; output_text is then empty.
  std::optional<std::string> error;
  int attempts = 0;

  bool ok() const { return !error.has_value(); }
};

// Produces a completion for a transcript. Implementations must be safe to call
// concurrently.
class Backend {
 public:
  virtual ~Backend() = default;

  // Stable identifier that participates in the request key, e.g. "verbatim"
  // or "partial:0.5".
  virtual std::string name() const = 0;
  // Whether GenerationParams::seed changes the output.
  virtual bool uses_seed() const { return false; }
  // Throws BackendError on failure.
  virtual std::string complete(const Transcript& transcript,
                               const GenerationParams& params) = 0;
};

// Echoes the held-out reference exactly.
class VerbatimBackend final : public Backend {
 public:
  std::string name() const override { return "verbatim"; }
  std::string complete(const Transcript& transcript,
                       const GenerationParams& params) override;
};

// Emits as many words as the reference, drawn from a synthetic vocabulary that
// shares no word with the reference.
class ObliviousBackend final : public Backend {
 public:
  std::string name() const override { return "oblivious"; }
  bool uses_seed() const override { return true; }
  std::string complete(const Transcript& transcript,
                       const GenerationParams& params) override;
};

// Walks the reference in fixed-size chunks and copies each one with
// probability p, otherwise substitutes fresh synthetic words. A fresh break
// word follows every copied chunk so each copy surfaces as its own maximal
// match.
class PartialCopyBackend final : public Backend {
 public:
  static constexpr std::size_t kDefaultChunkWords = 8;

  explicit PartialCopyBackend(double copy_probability,
                              std::size_t chunk_words = kDefaultChunkWords);

  std::string name() const override;
  bool uses_seed() const override { return true; }
  std::string complete(const Transcript& transcript,
                       const GenerationParams& params) override;

  double copy_probability() const { return p_; }
  std::size_t chunk_words() const { return chunk_words_; }

 private:
  double p_;
  std::size_t chunk_words_;
};

struct LiveBackendOptions {
  std::string base_url;  // e.g. https://api.openai.com/v1
  std::string api_key;   // sent as a bearer token when non-empty
  std::chrono::seconds connect_timeout{10};
  std::chrono::seconds read_timeout{120};
};

// Chat-completions client: POST {base_url}/chat/completions and read
// choices[0].message.content.
class LiveBackend final : public Backend {
 public:
  explicit LiveBackend(LiveBackendOptions options);

  // Reads MSR_API_KEY and, when base_url is empty, MSR_BASE_URL.
  static LiveBackendOptions options_from_env(std::string base_url = {});

  std::string name() const override { return "live"; }
  std::string complete(const Transcript& transcript,
                       const GenerationParams& params) override;

  // JSON request body for a transcript; exposed for tests.
  static std::string request_body(const Transcript& transcript,
                                  const GenerationParams& params);
  // Extracts choices[0].message.content; throws BackendError when the body
  // does not have that shape.
  static std::string parse_response(std::string_view body);

 private:
  LiveBackendOptions options_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

// Parses "live", "verbatim", "oblivious" or "partial:P". Throws UsageError.
std::shared_ptr<Backend> make_backend(std::string_view spec,
                                      const LiveBackendOptions& live = {});

// Hex SHA-256 of the canonical request: backend name, model, temperature,
// resolved max_tokens, seed (only for seeded backends) and full transcript.
std::string request_key(const Backend& backend, const Transcript& transcript,
                        const GenerationParams& params);

std::string utc_timestamp();

// Append-only JSON-lines store of completions keyed by request key. The first
// record stored under a key wins. Reads may run concurrently; writes are
// serialized.
class ResponseCache {
 public:
  // In-memory only.
  ResponseCache() = default;
  // Loads existing entries from path (skipping corrupt lines with a warning)
  // and appends new ones to it.
  explicit ResponseCache(std::filesystem::path path);

  std::optional<GenerationRecord> lookup(const std::string& key) const;
  // Returns false when the key was already present; nothing is written then.
  bool store(const GenerationRecord& record);

  std::size_t size() const;
  std::size_t skipped_lines() const { return skipped_lines_; }

 private:
  std::optional<std::filesystem::path> path_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, GenerationRecord> entries_;
  std::size_t skipped_lines_ = 0;
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds base_delay{1000};
  std::chrono::milliseconds max_delay{30000};
  // Replaceable for tests.
  std::function<void(std::chrono::milliseconds)> sleep;

  // Full-jitter exponential backoff for the given zero-based retry index.
  std::chrono::milliseconds delay_for(int retry, double unit_random) const;
};

// Routes transcripts to a backend with caching, retries and a bound on
// concurrent requests.
class Gateway {
 public:
  Gateway(std::shared_ptr<Backend> backend, std::shared_ptr<ResponseCache> cache,
          RetryPolicy retry = {});

  const Backend& backend() const { return *backend_; }

  // Throws BackendError when the request fails after the retry budget. An
  // empty completion is returned as-is (and counts as zero matches); a
  // warning is emitted.
  GeneratedCompletion generate(const Transcript& transcript,
                               const GenerationParams& params);

  // Same as generate but never throws for backend failures; the error is
  // stored in the record.
  GenerationRecord generate_record(const Transcript& transcript,
                                   const GenerationParams& params);

  // Results align with inputs. At most max_in_flight requests run at once and
  // cached requests are not re-issued.
  std::vector<GenerationRecord> generate_batch(std::span<const Transcript> transcripts,
                                               const GenerationParams& params,
                                               std::size_t max_in_flight);

  // Requests that reached the backend (including retries).
  std::size_t live_requests() const;

 private:
  std::string call_with_retry(const Transcript& transcript,
                              const GenerationParams& params, int& attempts);

  std::shared_ptr<Backend> backend_;
  std::shared_ptr<ResponseCache> cache_;
  RetryPolicy retry_;
  mutable std::mutex stats_mutex_;
  std::size_t live_requests_ = 0;
};

}  // namespace msr

#endif  // MSR_LLM_GATEWAY_HPP_
