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

#include "mqscan/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <thread>
#include <tuple>
#include <unordered_set>

namespace mqscan {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct Draw {
  std::size_t m;
  std::size_t run;
};

// Runs `task(i)` for i in [0, n) on up to `threads` workers. Results are
// written by index, so output does not depend on scheduling.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& task) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void validate_common(std::span<const VectorRecord> corpus,
                     const std::string& class_c, std::size_t max_m,
                     std::size_t n_runs, const ExperimentConfig& cfg) {
  cfg.retrieval.validate();
  if (n_runs == 0) throw InvalidArgument("n_runs must be at least 1");
  const std::size_t c = class_size(corpus, class_c);
  if (c == 0) throw InvalidArgument("unknown class label '" + class_c + "'");
  if (max_m >= c) {
    throw InvalidArgument("query-set size " + std::to_string(max_m) +
                          " must be smaller than class size " +
                          std::to_string(c));
  }
}

RunRecord make_row(Method method, const Draw& d, std::uint64_t seed,
                   std::optional<std::size_t> k,
                   std::span<const RecordId> retrieved,
                   std::span<const RecordId> positives) {
  const PrecisionRecall pr = precision_recall(retrieved, positives);
  RunRecord row;
  row.method = method;
  row.m = d.m;
  row.run = d.run;
  row.run_seed = seed;
  row.k = k;
  row.precision = pr.precision;
  row.recall = pr.recall;
  row.retrieved_count = retrieved.size();
  row.positives = positives.size();
  return row;
}

// One draw: split, scan once, baselines at every requested k (or at
// K = |C| - m when `k_values` is empty).
std::vector<RunRecord> run_draw(std::span<const VectorRecord> corpus,
                                const std::string& class_c, std::size_t c_size,
                                const Draw& d, std::uint64_t base_seed,
                                std::span<const std::size_t> k_values,
                                const ExperimentConfig& cfg) {
  const std::uint64_t seed = derive_run_seed(base_seed, d.m, d.run);
  const ClassSplit split = split_by_class(corpus, class_c, d.m, seed);

  std::vector<RunRecord> rows;
  const ScanResult scan = retrieve(split.queries, split.database, cfg.retrieval);
  rows.push_back(make_row(Method::kScan, d, seed, std::nullopt,
                          scan.retrieved_ids, split.positives));

  const KdTree tree(split.database, cfg.leaf_size);
  std::vector<std::size_t> ks(k_values.begin(), k_values.end());
  if (ks.empty()) ks.push_back(baseline_k(c_size, d.m));
  for (std::size_t k : ks) {
    const auto pre = kdtree_pre(split.queries, tree, k);
    rows.push_back(make_row(Method::kKdTreePre, d, seed, k, pre, split.positives));
  }
  for (std::size_t k : ks) {
    const auto post = kdtree_post(split.queries, tree, k, cfg.post_rank);
    rows.push_back(make_row(Method::kKdTreePost, d, seed, k, post, split.positives));
  }
  return rows;
}

ExperimentReport run_draws(std::span<const VectorRecord> corpus,
                           const std::string& class_c,
                           std::span<const std::size_t> m_values,
                           std::size_t n_runs, std::uint64_t base_seed,
                           std::span<const std::size_t> k_values,
                           const ExperimentConfig& cfg) {
  const std::size_t c_size = class_size(corpus, class_c);
  std::vector<Draw> draws;
  for (std::size_t m : m_values) {
    for (std::size_t r = 0; r < n_runs; ++r) draws.push_back({m, r});
  }
  std::vector<std::vector<RunRecord>> slots(draws.size());
  parallel_for(draws.size(), cfg.threads, [&](std::size_t i) {
    slots[i] = run_draw(corpus, class_c, c_size, draws[i], base_seed, k_values, cfg);
  });

  ExperimentReport report;
  report.dataset = cfg.dataset;
  report.class_c = class_c;
  for (auto& s : slots) {
    report.rows.insert(report.rows.end(), s.begin(), s.end());
  }
  report.aggregates = aggregate_rows(report.rows);
  return report;
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kScan:
      return "scan";
    case Method::kKdTreePre:
      return "kdtree_pre";
    case Method::kKdTreePost:
      return "kdtree_post";
  }
  return "unknown";
}

PrecisionRecall precision_recall(std::span<const RecordId> retrieved,
                                 std::span<const RecordId> positives) {
  const std::unordered_set<RecordId> pos(positives.begin(), positives.end());
  const std::unordered_set<RecordId> got(retrieved.begin(), retrieved.end());
  std::size_t hits = 0;
  for (const auto& id : got) hits += pos.contains(id) ? 1 : 0;
  PrecisionRecall pr;
  pr.precision = got.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(got.size());
  pr.recall = pos.empty() ? 1.0 : static_cast<double>(hits) / static_cast<double>(pos.size());
  return pr;
}

std::uint64_t derive_run_seed(std::uint64_t base_seed, std::size_t m,
                              std::size_t run) {
  return splitmix64(splitmix64(splitmix64(base_seed) ^ m) ^ run);
}

std::vector<Aggregate> aggregate_rows(std::span<const RunRecord> rows) {
  using Key = std::tuple<int, std::size_t, std::size_t, bool>;
  std::map<Key, std::vector<const RunRecord*>> groups;
  for (const auto& r : rows) {
    groups[{static_cast<int>(r.method), r.m, r.k.value_or(0), r.k.has_value()}]
        .push_back(&r);
  }
  std::vector<Aggregate> out;
  out.reserve(groups.size());
  for (const auto& [key, members] : groups) {
    Aggregate a;
    a.method = members.front()->method;
    a.m = members.front()->m;
    a.k = members.front()->k;
    a.runs = members.size();
    const auto n = static_cast<double>(members.size());
    for (const auto* r : members) {
      a.mean_precision += r->precision;
      a.mean_recall += r->recall;
      a.mean_retrieved += static_cast<double>(r->retrieved_count);
    }
    a.mean_precision /= n;
    a.mean_recall /= n;
    a.mean_retrieved /= n;
    double vp = 0.0;
    double vr = 0.0;
    for (const auto* r : members) {
      vp += (r->precision - a.mean_precision) * (r->precision - a.mean_precision);
      vr += (r->recall - a.mean_recall) * (r->recall - a.mean_recall);
    }
    a.std_precision = std::sqrt(vp / n);
    a.std_recall = std::sqrt(vr / n);
    out.push_back(a);
  }
  return out;
}

ExperimentReport run_experiment(std::span<const VectorRecord> corpus,
                                const std::string& class_c,
                                std::span<const std::size_t> m_values,
                                std::size_t n_runs, std::uint64_t base_seed,
                                const ExperimentConfig& cfg) {
  if (m_values.empty()) throw InvalidArgument("m_values must not be empty");
  for (std::size_t m : m_values) {
    if (m == 0) throw InvalidArgument("query-set sizes must be at least 1");
  }
  validate_common(corpus, class_c,
                  *std::max_element(m_values.begin(), m_values.end()), n_runs,
                  cfg);
  return run_draws(corpus, class_c, m_values, n_runs, base_seed, {}, cfg);
}

ExperimentReport ablation_k_sweep(std::span<const VectorRecord> corpus,
                                  const std::string& class_c, std::size_t m,
                                  std::span<const std::size_t> k_values,
                                  std::size_t n_runs, std::uint64_t base_seed,
                                  const ExperimentConfig& cfg) {
  if (m == 0) throw InvalidArgument("query-set size must be at least 1");
  if (k_values.empty()) throw InvalidArgument("k_values must not be empty");
  validate_common(corpus, class_c, m, n_runs, cfg);
  const std::size_t n_db = corpus.size() - m;
  for (std::size_t k : k_values) {
    if (k == 0 || k > n_db) {
      throw InvalidArgument("k = " + std::to_string(k) +
                            " must lie in [1, database size " +
                            std::to_string(n_db) + "]");
    }
  }
  const std::size_t ms[] = {m};
  return run_draws(corpus, class_c, ms, n_runs, base_seed, k_values, cfg);
}

}  // namespace mqscan
