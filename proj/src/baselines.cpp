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

#include "mqscan/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

namespace mqscan {

namespace {

struct HeapEntry {
  double dist2;
  std::uint32_t rank;
  std::uint32_t index;
};

// Max-heap on (dist2, rank): top is the current worst candidate.
struct WorseFirst {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.rank < b.rank);
  }
};

double squared_distance(const double* a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

KdTree::KdTree(const VectorDatabase& db, std::size_t leaf_size)
    : n_(db.size()), dim_(db.dim()), leaf_size_(leaf_size) {
  if (n_ == 0) throw InvalidArgument("cannot build a k-d tree over zero records");
  if (leaf_size_ == 0) throw InvalidArgument("leaf_size must be at least 1");
  if (n_ > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidArgument("database too large for the k-d tree index");
  }

  points_.reserve(n_ * dim_);
  ids_.reserve(n_);
  for (const auto& r : db.records()) {
    points_.insert(points_.end(), r.values.begin(), r.values.end());
    ids_.push_back(r.id);
  }

  std::vector<std::uint32_t> by_id(n_);
  std::iota(by_id.begin(), by_id.end(), 0u);
  std::sort(by_id.begin(), by_id.end(),
            [&](std::uint32_t a, std::uint32_t b) { return ids_[a] < ids_[b]; });
  id_rank_.resize(n_);
  for (std::uint32_t r = 0; r < n_; ++r) id_rank_[by_id[r]] = r;

  perm_.resize(n_);
  std::iota(perm_.begin(), perm_.end(), 0u);
  nodes_.reserve(2 * (n_ / leaf_size_ + 1));
  build(0, static_cast<std::uint32_t>(n_), 0);
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end,
                           std::size_t depth) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  if (end - begin <= leaf_size_) return id;

  const auto d = static_cast<std::uint32_t>(depth % dim_);
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(perm_.begin() + begin, perm_.begin() + mid,
                   perm_.begin() + end, [&](std::uint32_t a, std::uint32_t b) {
                     return point(a)[d] < point(b)[d];
                   });
  const double split = point(perm_[mid])[d];
  const std::int32_t left = build(begin, mid, depth + 1);
  const std::int32_t right = build(mid, end, depth + 1);
  Node& node = nodes_[static_cast<std::size_t>(id)];
  node.left = left;
  node.right = right;
  node.split_dim = d;
  node.split_value = split;
  return id;
}

std::size_t KdTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.leaf(); }));
}

std::vector<std::vector<std::size_t>> KdTree::leaves() const {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& node : nodes_) {
    if (!node.leaf()) continue;
    out.emplace_back(perm_.begin() + node.begin, perm_.begin() + node.end);
  }
  return out;
}

std::vector<Neighbor> KdTree::query(std::span<const double> v,
                                    std::size_t k) const {
  if (v.size() != dim_) {
    throw InvalidArgument("query vector has dimension " + std::to_string(v.size()) +
                          ", tree dimension is " + std::to_string(dim_));
  }
  if (k == 0) throw InvalidArgument("k must be at least 1");
  if (k > n_) {
    throw InvalidArgument("k = " + std::to_string(k) + " exceeds database size " +
                          std::to_string(n_));
  }

  std::priority_queue<HeapEntry, std::vector<HeapEntry>, WorseFirst> heap;
  const auto offer = [&](std::uint32_t index) {
    const HeapEntry e{squared_distance(point(index), v), id_rank_[index], index};
    if (heap.size() < k) {
      heap.push(e);
    } else if (WorseFirst{}(e, heap.top())) {
      heap.pop();
      heap.push(e);
    }
  };

  // Iterative depth-first search; each stack entry carries a lower bound on
  // the squared distance from v to anything in that subtree.
  struct Pending {
    std::int32_t node;
    double bound;
  };
  std::vector<Pending> stack{{0, 0.0}};
  while (!stack.empty()) {
    const Pending top = stack.back();
    stack.pop_back();
    // Non-strict so equal-distance records with a smaller id still get in.
    if (heap.size() == k && top.bound > heap.top().dist2) continue;
    const Node& node = nodes_[static_cast<std::size_t>(top.node)];
    if (node.leaf()) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) offer(perm_[i]);
      continue;
    }
    const double diff = v[node.split_dim] - node.split_value;
    const std::int32_t near = diff < 0.0 ? node.left : node.right;
    const std::int32_t far = diff < 0.0 ? node.right : node.left;
    stack.push_back({far, std::max(top.bound, diff * diff)});
    stack.push_back({near, top.bound});
  }

  std::vector<Neighbor> out(heap.size());
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = {heap.top().index, std::sqrt(heap.top().dist2)};
    heap.pop();
  }
  return out;
}

std::vector<RecordId> KdTree::query_ids(std::span<const double> v,
                                        std::size_t k) const {
  std::vector<RecordId> ids;
  for (const auto& nb : query(v, k)) ids.push_back(ids_[nb.index]);
  return ids;
}

std::vector<RecordId> kdtree_pre(const QuerySet& q, const KdTree& tree,
                                 std::size_t k) {
  std::vector<double> mean(q.dim(), 0.0);
  for (const auto& r : q.records()) {
    for (std::size_t l = 0; l < mean.size(); ++l) mean[l] += r.values[l];
  }
  for (auto& x : mean) x /= static_cast<double>(q.size());
  return tree.query_ids(mean, k);
}

std::vector<RecordId> kdtree_post(const QuerySet& q, const KdTree& tree,
                                  std::size_t k, PostRank rank) {
  std::vector<std::size_t> pool;
  std::vector<bool> in_pool(tree.size(), false);
  for (const auto& r : q.records()) {
    for (const auto& nb : tree.query(r.values, k)) {
      if (!in_pool[nb.index]) {
        in_pool[nb.index] = true;
        pool.push_back(nb.index);
      }
    }
  }

  struct Scored {
    double distance;
    std::uint32_t rank;
    std::size_t index;
  };
  std::vector<Scored> scored;
  scored.reserve(pool.size());
  // Distances are recomputed against every query, not only the one that
  // retrieved the candidate.
  for (std::size_t index : pool) {
    double acc = rank == PostRank::kMin ? std::numeric_limits<double>::infinity() : 0.0;
    const auto x = tree.point_values(index);
    for (const auto& r : q.records()) {
      const double d = std::sqrt(squared_distance(x.data(), r.values));
      acc = rank == PostRank::kMin ? std::min(acc, d) : acc + d;
    }
    if (rank == PostRank::kMean) acc /= static_cast<double>(q.size());
    scored.push_back({acc, tree.id_rank(index), index});
  }
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.rank < b.rank);
  });
  if (scored.size() > k) scored.resize(k);

  std::vector<RecordId> out;
  out.reserve(scored.size());
  for (const auto& s : scored) out.push_back(tree.id(s.index));
  return out;
}

std::size_t baseline_k(std::size_t class_size, std::size_t m) {
  if (m >= class_size) {
    throw InvalidArgument("baseline_k requires m < class size (m = " +
                          std::to_string(m) + ", |C| = " +
                          std::to_string(class_size) + ")");
  }
  return class_size - m;
}

}  // namespace mqscan
