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

#include <fstream>

#include "json.hpp"
#include "msr/error.hpp"
#include "msr/llm_gateway.hpp"
#include "msr/log.hpp"

namespace msr {
namespace {

using nlohmann::json;

std::optional<GenerationRecord> parse_line(const std::string& line) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object()) return std::nullopt;
  auto str = [&](const char* field) -> const json* {
    auto it = j.find(field);
    return it != j.end() && it->is_string() ? &*it : nullptr;
  };
  const auto* key = str("key");
  const auto* output = str("output");
  const auto* backend = str("backend");
  const auto* model = str("model");
  auto temp = j.find("temperature");
  if (!key || !output || !backend || !model || temp == j.end() || !temp->is_number()) {
    return std::nullopt;
  }
  GenerationRecord r;
  r.request_key = key->get<std::string>();
  r.output_text = output->get<std::string>();
  r.backend_name = backend->get<std::string>();
  r.params.model = model->get<std::string>();
  r.params.temperature = temp->get<double>();
  if (const auto* created = str("created_at")) r.created_at = created->get<std::string>();
  r.from_cache = true;
  return r;
}

}  // namespace

ResponseCache::ResponseCache(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(*path_);
  if (!in) return;  // created on first store
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto record = parse_line(line);
    if (!record) {
      ++skipped_lines_;
      warn("skipping corrupt cache line " + std::to_string(line_no) + " in " +
           path_->string());
      continue;
    }
    entries_.try_emplace(record->request_key, std::move(*record));
  }
}

std::optional<GenerationRecord> ResponseCache::lookup(const std::string& key) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

bool ResponseCache::store(const GenerationRecord& record) {
  std::unique_lock lock(mutex_);
  if (entries_.contains(record.request_key)) return false;
  if (path_) {
    json line = {
        {"key", record.request_key},
        {"output", record.output_text},
        {"backend", record.backend_name},
        {"model", record.params.model},
        {"temperature", record.params.temperature},
        {"created_at", record.created_at},
    };
    std::ofstream out(*path_, std::ios::app);
    out << line.dump() << '\n';
    out.flush();
    if (!out) throw DataError("cannot append to cache file " + path_->string());
  }
  GenerationRecord stored = record;
  stored.from_cache = true;
  stored.error.reset();
  entries_.emplace(stored.request_key, std::move(stored));
  return true;
}

std::size_t ResponseCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

}  // namespace msr
