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

// Repeated random-draw evaluation: for each query-set size m and run r a
// query set is drawn from the class of interest, the scan retrieval and both
// k-d tree baselines are run against the remaining records, and precision and
// recall against the held-out class members are recorded.

#ifndef MQSCAN_EVAL_HPP_
#define MQSCAN_EVAL_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mqscan/baselines.hpp"
#include "mqscan/core.hpp"
#include "mqscan/retrieval.hpp"

namespace mqscan {

enum class Method { kScan, kKdTreePre, kKdTreePost };

std::string_view method_name(Method m);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

/// Precision is 0 for an empty retrieval; recall is 1 when there are no
/// positives. Duplicate ids in `retrieved` count once.
PrecisionRecall precision_recall(std::span<const RecordId> retrieved,
                                 std::span<const RecordId> positives);

struct RunRecord {
  Method method = Method::kScan;
  std::size_t m = 0;
  std::size_t run = 0;
  std::uint64_t run_seed = 0;
  // Requested K for baselines; nullopt for the scan, whose size is intrinsic.
  std::optional<std::size_t> k;
  double precision = 0.0;
  double recall = 0.0;
  std::size_t retrieved_count = 0;
  std::size_t positives = 0;
};

struct Aggregate {
  Method method = Method::kScan;
  std::size_t m = 0;
  std::optional<std::size_t> k;
  std::size_t runs = 0;
  double mean_precision = 0.0;
  double std_precision = 0.0;
  double mean_recall = 0.0;
  double std_recall = 0.0;
  double mean_retrieved = 0.0;
};

struct ExperimentReport {
  std::string dataset;
  std::string class_c;
  std::vector<RunRecord> rows;        // sorted by (m, run, method, k)
  std::vector<Aggregate> aggregates;  // sorted by (method, m, k)
};

struct ExperimentConfig {
  RetrievalConfig retrieval;
  PostRank post_rank = PostRank::kMin;
  std::size_t leaf_size = KdTree::kDefaultLeafSize;
  std::string dataset = "corpus";
  // 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// splitmix64(splitmix64(splitmix64(base_seed) ^ m) ^ run): each (m, run)
/// draw is independent of which other m values are requested.
std::uint64_t derive_run_seed(std::uint64_t base_seed, std::size_t m,
                              std::size_t run);

/// Mean and population std of precision/recall per (method, m, k).
std::vector<Aggregate> aggregate_rows(std::span<const RunRecord> rows);

ExperimentReport run_experiment(std::span<const VectorRecord> corpus,
                                const std::string& class_c,
                                std::span<const std::size_t> m_values,
                                std::size_t n_runs, std::uint64_t base_seed,
                                const ExperimentConfig& cfg = {});

/// As run_experiment at a single m, but baselines run at every k in
/// `k_values` while the scan runs once per draw.
ExperimentReport ablation_k_sweep(std::span<const VectorRecord> corpus,
                                  const std::string& class_c, std::size_t m,
                                  std::span<const std::size_t> k_values,
                                  std::size_t n_runs, std::uint64_t base_seed,
                                  const ExperimentConfig& cfg = {});

}  // namespace mqscan

#endif  // MQSCAN_EVAL_HPP_
