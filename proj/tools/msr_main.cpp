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

// msr: command-line front end for many-shot regurgitation audits.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 backend error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "msr/corpus.hpp"
#include "msr/error.hpp"
#include "msr/llm_gateway.hpp"
#include "msr/match_kernel.hpp"
#include "msr/prompt_builder.hpp"
#include "msr/runner.hpp"
#include "msr/stats.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitBackend = 3;

struct CorpusOptions {
  std::string pre_path;
  std::string post_path;
};

struct AuditOptions {
  CorpusOptions corpus;
  msr::ExperimentConfig config;
  std::size_t l_max = 0;
  std::size_t max_tokens = 0;
  std::size_t truncate = 0;
  std::string cache_path;
  std::string post_backend;
  std::string base_url;
  std::string out_dir;
  int max_attempts = 5;
  bool exact = false;
};

void add_corpus_options(CLI::App* cmd, CorpusOptions& opts) {
  cmd->add_option("--pre", opts.pre_path, "Pre-cutoff corpus (JSON lines)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--post", opts.post_path, "Post-cutoff corpus (JSON lines)")
      ->required()
      ->check(CLI::ExistingFile);
}

void add_audit_options(CLI::App* cmd, AuditOptions& opts) {
  auto& c = opts.config;
  add_corpus_options(cmd, opts.corpus);
  cmd->add_option("--backend", c.backend, "live | verbatim | oblivious | partial:P")
      ->capture_default_str();
  cmd->add_option("--post-backend", opts.post_backend,
                  "Backend for the post cohort (defaults to --backend)");
  cmd->add_option("--model", c.model, "Model identifier")->capture_default_str();
  cmd->add_option("--shots", c.shots, "Even number of segments")->capture_default_str();
  cmd->add_option("--lmin", c.l_min, "Shortest match length counted (words)")
      ->capture_default_str();
  cmd->add_option("--lmax", opts.l_max,
                  "Longest threshold (words); default 12, or floor(L/shots) with --truncate");
  cmd->add_option("--temperature", c.temperature, "Sampling temperature")
      ->capture_default_str();
  cmd->add_option("--max-tokens", opts.max_tokens,
                  "Generation cap; default ceil(1.5 x reference words)");
  cmd->add_option("--min-words", c.min_words, "Keep documents with more words than this")
      ->capture_default_str();
  cmd->add_option("--truncate", opts.truncate, "Truncate documents to L words");
  cmd->add_option("--concurrency", c.max_in_flight, "Maximum requests in flight")
      ->capture_default_str();
  cmd->add_option("--cache", opts.cache_path, "Response cache file (JSON lines)");
  cmd->add_option("--seed", c.seed, "Seed for mock backends")->capture_default_str();
  cmd->add_option("--system-prompt", c.system_prompt, "System prompt")
      ->capture_default_str();
  cmd->add_option("--base-url", opts.base_url,
                  "Chat-completions base URL (or MSR_BASE_URL)");
  cmd->add_flag("--lowercase", c.lowercase, "Lowercase words before matching");
  cmd->add_flag("--exact", opts.exact, "Count matches of exactly k words");
  cmd->add_option("--max-attempts", opts.max_attempts, "Attempts per request, including retries")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", opts.out_dir, "Output directory for reports");
}

msr::ExperimentConfig finalize(AuditOptions& opts) {
  auto c = opts.config;
  if (opts.l_max) c.l_max = opts.l_max;
  if (opts.max_tokens) c.max_tokens = opts.max_tokens;
  if (opts.truncate) c.truncate = opts.truncate;
  if (!opts.cache_path.empty()) c.cache_path = opts.cache_path;
  if (!opts.post_backend.empty()) c.post_backend = opts.post_backend;
  if (opts.exact) c.count_mode = msr::CountMode::kExact;
  return c;
}

msr::AuditBackends backends_for(const msr::ExperimentConfig& config, const AuditOptions& opts) {
  msr::RetryPolicy retry;
  retry.max_attempts = opts.max_attempts;
  return msr::make_backends(config, msr::LiveBackend::options_from_env(opts.base_url), retry);
}

std::vector<msr::Document> load_both(const CorpusOptions& opts) {
  auto docs = msr::load_corpus(opts.pre_path, msr::Cohort::kPre);
  auto post = msr::load_corpus(opts.post_path, msr::Cohort::kPost);
  docs.insert(docs.end(), std::make_move_iterator(post.begin()),
              std::make_move_iterator(post.end()));
  return docs;
}

void print_comparison(const msr::AuditReport& report, std::ostream& out) {
  out << "docs=" << report.documents.size() << " failures=" << report.failures
      << " comparison=" << msr::comparison_json(report.comparison) << '\n';
}

int run_audit_command(AuditOptions& opts) {
  const auto config = finalize(opts);
  msr::validate(config);
  const auto docs = load_both(opts.corpus);
  const auto backends = backends_for(config, opts);
  const auto report = msr::run_audit(docs, config, backends);
  if (opts.out_dir.empty()) {
    std::cout << msr::report_json(report);
  } else {
    msr::emit_report(report, opts.out_dir);
    print_comparison(report, std::cout);
  }
  return 0;
}

template <typename T>
std::vector<T> parse_values(const std::vector<std::string>& raw) {
  std::vector<T> out;
  for (const auto& s : raw) {
    std::istringstream in(s);
    T v{};
    if (!(in >> v) || !in.eof()) throw msr::UsageError("invalid sweep value '" + s + "'");
    out.push_back(v);
  }
  return out;
}

std::string value_label(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

int run_sweep_command(const std::string& kind, const std::vector<std::string>& raw,
                      AuditOptions& opts) {
  const auto config = finalize(opts);
  const auto docs = load_both(opts.corpus);
  const auto backends = backends_for(config, opts);

  std::vector<msr::SweepPoint> points;
  std::optional<msr::CohortComparison> pairwise;
  if (kind == "shots") {
    const auto values = parse_values<std::size_t>(raw);
    points = msr::sweep_shots(docs, config, backends, values);
  } else if (kind == "temperature") {
    const auto values = parse_values<double>(raw);
    auto sweep = msr::sweep_temperature(docs, config, backends, values);
    points = std::move(sweep.points);
    pairwise = sweep.pairwise;
  } else {
    const auto values = parse_values<std::size_t>(raw);
    points = msr::sweep_length(docs, config, backends, values);
  }

  nlohmann::ordered_json index = {{"sweep", kind}, {"points", nlohmann::ordered_json::array()}};
  for (const auto& point : points) {
    const auto label = kind + "_" + value_label(point.value);
    index["points"].push_back(
        {{"value", point.value},
         {"l_max", point.report.l_max},
         {"failures", point.report.failures},
         {"comparison", nlohmann::ordered_json::parse(
                            msr::comparison_json(point.report.comparison))},
         {"report", label}});
    if (!opts.out_dir.empty()) {
      msr::emit_report(point.report, std::filesystem::path(opts.out_dir) / label);
    }
  }
  if (pairwise) {
    index["pairwise"] = nlohmann::ordered_json::parse(msr::comparison_json(*pairwise));
  }
  const auto text = index.dump(2) + "\n";
  if (opts.out_dir.empty()) {
    std::cout << text;
  } else {
    std::ofstream(std::filesystem::path(opts.out_dir) / "sweep.json") << text;
    std::cout << text;
  }
  return 0;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw msr::DataError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_match_command(const std::string& ref_path, const std::string& gen_path,
                      std::size_t l_min, std::size_t l_max, bool exact, bool lowercase) {
  const auto ref = msr::token_strings(msr::tokenize(read_text(ref_path)), lowercase);
  const auto gen = msr::token_strings(msr::tokenize(read_text(gen_path)), lowercase);
  const auto matches = msr::maximal_common_substrings(ref, gen);
  const auto f = msr::frequency_array(matches, l_min, l_max,
                                      exact ? msr::CountMode::kExact : msr::CountMode::kAtLeast);
  std::cout << "pos_ref,pos_gen,length\n";
  for (const auto& m : matches) {
    std::cout << m.pos_ref << ',' << m.pos_gen << ',' << m.length << '\n';
  }
  std::cout << '\n' << "k,f_k\n";
  for (std::size_t k = l_min; k <= l_max; ++k) std::cout << k << ',' << f.at(k) << '\n';
  return 0;
}

// One count per line; with several columns the last one is used, and a
// non-numeric first line is treated as a header.
std::vector<double> read_counts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw msr::DataError("cannot open " + path);
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto field = line.substr(line.find_last_of(',') == std::string::npos
                                       ? 0
                                       : line.find_last_of(',') + 1);
    std::istringstream parse(field);
    double v = 0.0;
    if (!(parse >> v) || !(parse >> std::ws).eof()) {
      if (!seen_data && out.empty()) {
        seen_data = true;
        continue;
      }
      throw msr::DataError(path + ":" + std::to_string(line_no) + ": not a number: '" +
                           field + "'");
    }
    seen_data = true;
    out.push_back(v);
  }
  if (out.empty()) throw msr::DataError(path + ": no counts found");
  return out;
}

int run_stats_command(const std::string& pre_path, const std::string& post_path) {
  const auto pre = read_counts(pre_path);
  const auto post = read_counts(post_path);
  const auto c = msr::compare_samples(post, pre);
  nlohmann::ordered_json j = {{"delta", c.delta}, {"ks", c.ks}, {"H", c.h_statistic},
                              {"p", c.p_value}};
  std::cout << j.dump() << '\n';
  return 0;
}

int run_transcript_command(const CorpusOptions& corpus, const std::string& doc_id,
                           std::size_t shots, const std::string& system_prompt,
                           std::size_t truncate) {
  const auto docs = load_both(corpus);
  for (const auto& doc : docs) {
    if (doc.id != doc_id) continue;
    auto tokenized = msr::tokenize_document(doc);
    if (truncate) tokenized = msr::truncate(tokenized, truncate);
    const auto seg = msr::segment(tokenized, shots);
    std::cout << msr::format_transcript(msr::build_transcript(tokenized, seg, system_prompt));
    return 0;
  }
  throw msr::DataError("no document with id '" + doc_id + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Many-shot regurgitation audit toolkit"};
  app.require_subcommand(1);

  AuditOptions audit_opts;
  auto* audit = app.add_subcommand("audit", "Audit a pre/post corpus pair");
  add_audit_options(audit, audit_opts);

  AuditOptions sweep_opts;
  std::string sweep_kind;
  std::vector<std::string> sweep_values;
  auto* sweep = app.add_subcommand("sweep", "Repeat the audit over shots, temperature or length");
  sweep->add_option("kind", sweep_kind, "shots | temperature | length")
      ->required()
      ->check(CLI::IsMember({"shots", "temperature", "length"}));
  sweep->add_option("--values", sweep_values, "Values to sweep")
      ->required()
      ->delimiter(',');
  add_audit_options(sweep, sweep_opts);

  std::string match_a;
  std::string match_b;
  std::size_t match_lmin = msr::kDefaultLMin;
  std::size_t match_lmax = msr::kDefaultLMax;
  bool match_exact = false;
  bool match_lower = false;
  auto* match = app.add_subcommand("match", "Maximal word matches between two text files");
  match->add_option("reference", match_a, "Reference text file")->required()->check(CLI::ExistingFile);
  match->add_option("generated", match_b, "Generated text file")->required()->check(CLI::ExistingFile);
  match->add_option("--lmin", match_lmin)->capture_default_str();
  match->add_option("--lmax", match_lmax)->capture_default_str();
  match->add_flag("--exact", match_exact, "Count matches of exactly k words");
  match->add_flag("--lowercase", match_lower, "Lowercase words before matching");

  std::string stats_pre;
  std::string stats_post;
  auto* stats = app.add_subcommand("stats", "Compare two count arrays (CSV)");
  stats->add_option("pre", stats_pre, "Pre-cohort counts")->required()->check(CLI::ExistingFile);
  stats->add_option("post", stats_post, "Post-cohort counts")->required()->check(CLI::ExistingFile);

  CorpusOptions transcript_corpus;
  std::string transcript_doc;
  std::size_t transcript_shots = msr::kDefaultShots;
  std::size_t transcript_truncate = 0;
  std::string transcript_prompt(msr::kDefaultSystemPrompt);
  auto* transcript = app.add_subcommand("transcript", "Print the faux conversation for one document");
  add_corpus_options(transcript, transcript_corpus);
  transcript->add_option("--doc", transcript_doc, "Document id")->required();
  transcript->add_option("--shots", transcript_shots)->capture_default_str();
  transcript->add_option("--truncate", transcript_truncate);
  transcript->add_option("--system-prompt", transcript_prompt)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*audit) return run_audit_command(audit_opts);
    if (*sweep) return run_sweep_command(sweep_kind, sweep_values, sweep_opts);
    if (*match) {
      return run_match_command(match_a, match_b, match_lmin, match_lmax, match_exact,
                               match_lower);
    }
    if (*stats) return run_stats_command(stats_pre, stats_post);
    if (*transcript) {
      return run_transcript_command(transcript_corpus, transcript_doc, transcript_shots,
                                    transcript_prompt, transcript_truncate);
    }
  } catch (const msr::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const msr::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const msr::BackendError& e) {
    std::cerr << "backend error: " << e.what() << '\n';
    return kExitBackend;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
