// Copyright 2026 The mqscan Authors.
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

// mqscan: multi-query anomalous-pattern retrieval and its evaluation harness.
//
//   mqscan scan   --data corpus.csv --class C --m 8 --seed 1 --out dir
//   mqscan eval   --data corpus.csv --class C --m 1,2,4,8 --runs 50 --out dir
//   mqscan ablate --data corpus.csv --class C --m 64 --k 146,293,586 --out dir
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 runtime error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "CLI11.hpp"
#include "mqscan/baselines.hpp"
#include "mqscan/core.hpp"
#include "mqscan/eval.hpp"
#include "mqscan/io.hpp"
#include "mqscan/retrieval.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitRuntime = 4;

struct Options {
  std::string data;
  std::string class_c;
  std::string label_column = "label";
  std::vector<std::size_t> m_values;
  std::vector<std::string> query_ids;
  std::size_t runs = 50;
  std::uint64_t seed = 0;
  double alpha_max = mqscan::kDefaultAlphaMax;
  double eps = mqscan::kDefaultEps;
  std::size_t min_dims = 1;
  mqscan::PostRank post_rank = mqscan::PostRank::kMin;
  std::vector<std::size_t> k_values;
  std::string out = ".";
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--data", o.data, "Labeled CSV corpus")->required();
  cmd->add_option("--label-column", o.label_column, "Name of the label column");
  cmd->add_option("--seed", o.seed, "Base random seed");
  cmd->add_option("--alpha-max", o.alpha_max, "Largest significance level scanned")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--eps", o.eps, "Standard deviations below this are constant");
  cmd->add_option("--min-dims", o.min_dims, "Smallest dimension subset considered");
  cmd->add_option("--out", o.out, "Output directory");
}

void add_experiment(CLI::App* cmd, Options& o) {
  cmd->add_option("--class", o.class_c, "Class of interest")->required();
  cmd->add_option("--runs", o.runs, "Random query draws per query-set size");
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  const std::map<std::string, mqscan::PostRank> ranks{
      {"min", mqscan::PostRank::kMin}, {"mean", mqscan::PostRank::kMean}};
  cmd->add_option("--post-rank", o.post_rank, "kdtree_post re-ranking distance")
      ->transform(CLI::CheckedTransformer(ranks, CLI::ignore_case));
}

mqscan::RetrievalConfig retrieval_config(const Options& o) {
  mqscan::RetrievalConfig cfg;
  cfg.alpha_max = o.alpha_max;
  cfg.eps = o.eps;
  cfg.min_dims = o.min_dims;
  cfg.validate();
  return cfg;
}

mqscan::ExperimentConfig experiment_config(const Options& o) {
  mqscan::ExperimentConfig cfg;
  cfg.retrieval = retrieval_config(o);
  cfg.post_rank = o.post_rank;
  cfg.threads = o.threads;
  cfg.dataset = std::filesystem::path(o.data).stem().string();
  return cfg;
}

mqscan::Corpus load(const Options& o) {
  mqscan::CorpusOptions copts;
  copts.label_column = o.label_column;
  return mqscan::load_corpus(o.data, copts);
}

std::filesystem::path output_dir(const Options& o) {
  std::filesystem::path dir(o.out);
  std::filesystem::create_directories(dir);
  return dir;
}

int run_scan(const Options& o) {
  const auto cfg = retrieval_config(o);
  if (o.query_ids.empty() && (o.class_c.empty() || o.m_values.size() != 1)) {
    throw mqscan::InvalidArgument(
        "scan needs --queries, or --class with a single --m value");
  }
  const mqscan::Corpus corpus = load(o);

  std::optional<mqscan::ClassSplit> split;
  if (!o.query_ids.empty()) {
    const std::unordered_set<std::string> wanted(o.query_ids.begin(), o.query_ids.end());
    std::vector<mqscan::VectorRecord> queries;
    std::vector<mqscan::VectorRecord> rest;
    for (const auto& r : corpus.records) {
      (wanted.contains(r.id) ? queries : rest).push_back(r);
    }
    if (queries.size() != wanted.size()) {
      throw mqscan::InvalidArgument("some --queries ids are not in the corpus");
    }
    if (rest.empty()) throw mqscan::InvalidArgument("no database records left");
    split.emplace(mqscan::ClassSplit{mqscan::QuerySet(std::move(queries)),
                                     mqscan::build_database(std::move(rest)),
                                     {}});
  } else {
    split.emplace(mqscan::split_by_class(corpus.records, o.class_c,
                                         o.m_values.front(), o.seed));
  }

  const mqscan::ScanResult result = mqscan::retrieve(split->queries, split->database, cfg);
  const auto doc = mqscan::scan_result_json(result, split->queries);
  mqscan::write_files_atomically({{output_dir(o) / "scan_result.json", doc}});
  std::cout << "retrieved " << result.retrieved_ids.size() << " records on "
            << result.dims.size() << " dimensions (score "
            << mqscan::format_double(result.score) << ")\n";
  return 0;
}

void write_report(const Options& o, const mqscan::ExperimentReport& report) {
  const auto dir = output_dir(o);
  mqscan::write_files_atomically({{dir / "runs.csv", mqscan::runs_csv(report)},
                                  {dir / "aggregates.csv", mqscan::aggregates_csv(report)}});
  for (const auto& a : report.aggregates) {
    std::cout << mqscan::method_name(a.method) << " m=" << a.m;
    if (a.k) std::cout << " k=" << *a.k;
    std::cout << " precision=" << a.mean_precision << " recall=" << a.mean_recall
              << " retrieved=" << a.mean_retrieved << '\n';
  }
}

int run_eval(const Options& o) {
  const auto cfg = experiment_config(o);
  std::vector<std::size_t> ms = o.m_values;
  if (ms.empty()) ms = {1, 2, 4, 8, 16, 32, 64};
  const mqscan::Corpus corpus = load(o);
  write_report(o, mqscan::run_experiment(corpus.records, o.class_c, ms, o.runs,
                                         o.seed, cfg));
  return 0;
}

int run_ablate(const Options& o) {
  const auto cfg = experiment_config(o);
  if (o.m_values.size() != 1) {
    throw mqscan::InvalidArgument("ablate needs exactly one --m value");
  }
  if (o.k_values.empty()) throw mqscan::InvalidArgument("ablate needs --k values");
  const mqscan::Corpus corpus = load(o);
  write_report(o, mqscan::ablation_k_sweep(corpus.records, o.class_c,
                                           o.m_values.front(), o.k_values,
                                           o.runs, o.seed, cfg));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-query retrieval by anomalous-pattern scanning"};
  app.set_config("--config", "", "TOML/INI config file; flags override it");
  app.require_subcommand(1);

  Options scan_opts;
  auto* scan = app.add_subcommand("scan", "Retrieve records sharing the queries' pattern");
  add_common(scan, scan_opts);
  scan->add_option("--class", scan_opts.class_c, "Class to draw queries from");
  scan->add_option("--m", scan_opts.m_values, "Query-set size")->delimiter(',');
  scan->add_option("--queries", scan_opts.query_ids, "Explicit query ids")
      ->delimiter(',');

  Options eval_opts;
  auto* eval = app.add_subcommand("eval", "Precision/recall over random query draws");
  add_common(eval, eval_opts);
  add_experiment(eval, eval_opts);
  eval->add_option("--m", eval_opts.m_values, "Query-set sizes")->delimiter(',');

  Options ablate_opts;
  auto* ablate = app.add_subcommand("ablate", "Baseline retrieval-size sweep");
  add_common(ablate, ablate_opts);
  add_experiment(ablate, ablate_opts);
  ablate->add_option("--m", ablate_opts.m_values, "Query-set size")->delimiter(',');
  ablate->add_option("--k", ablate_opts.k_values, "Baseline retrieval sizes")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*scan) return run_scan(scan_opts);
    if (*eval) return run_eval(eval_opts);
    return run_ablate(ablate_opts);
  } catch (const mqscan::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const mqscan::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
