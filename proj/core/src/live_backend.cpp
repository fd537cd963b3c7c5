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

#include <cstdlib>

#include "httplib.h"
#include "json.hpp"
#include "msr/error.hpp"
#include "msr/llm_gateway.hpp"

namespace msr {
namespace {

bool is_transient_status(int status) {
  return status == 408 || status == 425 || status == 429 || status >= 500;
}

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : std::string();
}

}  // namespace

LiveBackend::LiveBackend(LiveBackendOptions options) : options_(std::move(options)) {
  const auto& url = options_.base_url;
  if (url.empty()) return;  // reported on first request
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw UsageError("base URL must include a scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  if (path_start != std::string::npos) path_prefix_ = url.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

LiveBackendOptions LiveBackend::options_from_env(std::string base_url) {
  LiveBackendOptions options;
  options.base_url = base_url.empty() ? env_or_empty("MSR_BASE_URL") : std::move(base_url);
  options.api_key = env_or_empty("MSR_API_KEY");
  return options;
}

std::string LiveBackend::request_body(const Transcript& transcript,
                                      const GenerationParams& params) {
  nlohmann::json messages = nlohmann::json::array();
  messages.push_back({{"role", "system"}, {"content", transcript.system_prompt}});
  for (const auto& turn : transcript.turns) {
    messages.push_back({{"role", to_string(turn.role)}, {"content", turn.text}});
  }
  nlohmann::json body = {
      {"model", params.model},
      {"messages", std::move(messages)},
      {"temperature", params.temperature},
      {"max_tokens", resolve_max_tokens(params, transcript)},
  };
  return body.dump();
}

std::string LiveBackend::parse_response(std::string_view body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error&) {
    throw BackendError("malformed response body (not JSON)", false);
  }
  try {
    const auto& content = doc.at("choices").at(0).at("message").at("content");
    if (content.is_null()) return {};
    return content.get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw BackendError("malformed response body (no choices[0].message.content)", false);
  }
}

std::string LiveBackend::complete(const Transcript& transcript,
                                  const GenerationParams& params) {
  if (scheme_host_port_.empty()) {
    throw BackendError("live backend has no base URL (set --base-url or MSR_BASE_URL)",
                       false);
  }
  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(options_.connect_timeout);
  client.set_read_timeout(options_.read_timeout);
  client.set_write_timeout(options_.read_timeout);
  httplib::Headers headers;
  if (!options_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + options_.api_key);
  }
  auto res = client.Post(path_prefix_ + "/chat/completions", headers,
                         request_body(transcript, params), "application/json");
  if (!res) {
    throw BackendError("request failed: " + httplib::to_string(res.error()), true);
  }
  if (res->status < 200 || res->status >= 300) {
    std::string snippet = res->body.substr(0, 200);
    throw BackendError("backend returned status " + std::to_string(res->status) +
                           (snippet.empty() ? "" : ": " + snippet),
                       is_transient_status(res->status), res->status);
  }
  return parse_response(res->body);
}

}  // namespace msr
