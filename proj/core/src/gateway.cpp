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

#include <algorithm>
#include <cmath>
#include <atomic>
#include <random>
#include <thread>

#include "msr/error.hpp"
#include "msr/llm_gateway.hpp"
#include "msr/log.hpp"

namespace msr {

std::chrono::milliseconds RetryPolicy::delay_for(int retry, double unit_random) const {
  const double cap = static_cast<double>(max_delay.count());
  const double ceiling =
      std::min(cap, static_cast<double>(base_delay.count()) * std::ldexp(1.0, retry));
  // Half fixed, half jitter: never collapses to zero wait.
  return std::chrono::milliseconds(
      static_cast<long long>(ceiling * (0.5 + 0.5 * unit_random)));
}

Gateway::Gateway(std::shared_ptr<Backend> backend, std::shared_ptr<ResponseCache> cache,
                 RetryPolicy retry)
    : backend_(std::move(backend)), cache_(std::move(cache)), retry_(std::move(retry)) {
  if (!backend_) throw UsageError("gateway requires a backend");
  if (!cache_) cache_ = std::make_shared<ResponseCache>();
  if (retry_.max_attempts < 1) retry_.max_attempts = 1;
  if (!retry_.sleep) {
    retry_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

std::size_t Gateway::live_requests() const {
  std::lock_guard<std::mutex> lock(stats_mutex_);
  return live_requests_;
}

std::string Gateway::call_with_retry(const Transcript& transcript,
                                     const GenerationParams& params, int& attempts) {
  thread_local std::mt19937_64 jitter(std::random_device{}());
  for (attempts = 1;; ++attempts) {
    {
      std::lock_guard<std::mutex> lock(stats_mutex_);
      ++live_requests_;
    }
    try {
      return backend_->complete(transcript, params);
    } catch (const BackendError& e) {
      if (!e.transient() || attempts >= retry_.max_attempts) throw;
      const double u = static_cast<double>(jitter() >> 11) * 0x1.0p-53;
      retry_.sleep(retry_.delay_for(attempts - 1, u));
    }
  }
}

GenerationRecord Gateway::generate_record(const Transcript& transcript,
                                          const GenerationParams& params) {
  validate(params);
  GenerationRecord record;
  record.doc_id = transcript.doc_id;
  record.backend_name = backend_->name();
  record.params = params;
  record.params.max_tokens = resolve_max_tokens(params, transcript);
  record.request_key = request_key(*backend_, transcript, params);

  if (auto hit = cache_->lookup(record.request_key)) {
    record.output_text = std::move(hit->output_text);
    record.created_at = std::move(hit->created_at);
    record.from_cache = true;
    return record;
  }
  try {
    record.output_text = call_with_retry(transcript, params, record.attempts);
  } catch (const std::exception& e) {
    record.error = e.what();
    return record;
  }
  if (record.output_text.find_first_not_of(" \t\r\n") == std::string::npos) {
    warn("empty completion for document '" + transcript.doc_id + "'");
  }
  record.created_at = utc_timestamp();
  cache_->store(record);
  return record;
}

GeneratedCompletion Gateway::generate(const Transcript& transcript,
                                      const GenerationParams& params) {
  auto record = generate_record(transcript, params);
  if (record.error) throw BackendError(*record.error, false);
  return GeneratedCompletion::from_text(std::move(record.output_text));
}

std::vector<GenerationRecord> Gateway::generate_batch(
    std::span<const Transcript> transcripts, const GenerationParams& params,
    std::size_t max_in_flight) {
  if (max_in_flight < 1) throw UsageError("max_in_flight must be at least 1");
  validate(params);
  std::vector<GenerationRecord> records(transcripts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < transcripts.size(); i = next++) {
      records[i] = generate_record(transcripts[i], params);
    }
  };
  const std::size_t workers = std::min(max_in_flight, transcripts.size());
  if (workers <= 1) {
    worker();
    return records;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  pool.clear();  // joins
  return records;
}

}  // namespace msr
