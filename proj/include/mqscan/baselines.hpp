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

#ifndef MQSCAN_BASELINES_HPP_
#define MQSCAN_BASELINES_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mqscan/core.hpp"

namespace mqscan {

struct Neighbor {
  std::size_t index;  // position in the database
  double distance;    // Euclidean
};

/// Exact Euclidean k-d tree: cycling split dimension, median split, full
/// backtracking. Equal distances are ordered by ascending record id, so the
/// result is the same id list a brute-force scan would produce.
class KdTree {
 public:
  static constexpr std::size_t kDefaultLeafSize = 16;

  explicit KdTree(const VectorDatabase& db,
                  std::size_t leaf_size = kDefaultLeafSize);

  /// The k nearest records, ascending by (distance, id). Throws
  /// InvalidArgument if k is 0 or exceeds the database size.
  std::vector<Neighbor> query(std::span<const double> v, std::size_t k) const;
  std::vector<RecordId> query_ids(std::span<const double> v, std::size_t k) const;

  std::size_t size() const { return n_; }
  std::size_t dim() const { return dim_; }
  std::size_t leaf_count() const;
  std::size_t node_count() const { return nodes_.size(); }
  const RecordId& id(std::size_t index) const { return ids_[index]; }
  std::span<const double> point_values(std::size_t index) const {
    return {point(index), dim_};
  }

  /// Position of record `index` in ascending id order; the tie-break key.
  std::uint32_t id_rank(std::size_t index) const { return id_rank_[index]; }

  /// Record indices held by each leaf, in tree order.
  std::vector<std::vector<std::size_t>> leaves() const;

 private:
  struct Node {
    // Leaves cover perm_[begin, end); inner nodes split on split_dim.
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t split_dim = 0;
    double split_value = 0.0;
    bool leaf() const { return left < 0; }
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end, std::size_t depth);
  const double* point(std::size_t index) const { return &points_[index * dim_]; }

  std::vector<RecordId> ids_;
  std::size_t n_;
  std::size_t dim_;
  std::size_t leaf_size_;
  std::vector<double> points_;  // row-major copy of the database vectors
  std::vector<std::uint32_t> perm_;
  std::vector<std::uint32_t> id_rank_;
  std::vector<Node> nodes_;
};

/// Reference point used to re-rank the union in kdtree_post.
enum class PostRank { kMin, kMean };

/// k-NN of the element-wise mean of the query vectors.
std::vector<RecordId> kdtree_pre(const QuerySet& q, const KdTree& tree,
                                 std::size_t k);

/// k-NN per query, union, then top-k of the union by the minimum (or mean)
/// distance to the query vectors. Ties by ascending id.
std::vector<RecordId> kdtree_post(const QuerySet& q, const KdTree& tree,
                                  std::size_t k,
                                  PostRank rank = PostRank::kMin);

/// K = |C| - |Q|: the number of class members left in the database.
std::size_t baseline_k(std::size_t class_size, std::size_t m);

}  // namespace mqscan

#endif  // MQSCAN_BASELINES_HPP_
