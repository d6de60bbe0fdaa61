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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "support/oracles.hpp"

namespace mqscan {
namespace {

VectorRecord rec(std::string id, std::vector<double> v) {
  return {std::move(id), std::nullopt, std::move(v)};
}

double euclid(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Union of per-query brute-force k-NN, re-ranked by min or mean distance.
std::vector<RecordId> brute_post(const std::vector<VectorRecord>& db,
                                 const std::vector<VectorRecord>& qs,
                                 std::size_t k, bool use_min) {
  std::map<RecordId, const VectorRecord*> by_id;
  for (const auto& r : db) by_id[r.id] = &r;
  std::map<RecordId, bool> pool;
  for (const auto& q : qs) {
    for (const auto& id : oracle::linear_knn(db, q.values, k)) pool[id] = true;
  }
  std::vector<std::pair<double, RecordId>> ranked;
  for (const auto& [id, unused] : pool) {
    double acc = use_min ? INFINITY : 0.0;
    for (const auto& q : qs) {
      const double d = euclid(by_id[id]->values, q.values);
      acc = use_min ? std::min(acc, d) : acc + d;
    }
    if (!use_min) acc /= static_cast<double>(qs.size());
    ranked.emplace_back(acc, id);
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<RecordId> out;
  for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) out.push_back(ranked[i].second);
  return out;
}

TEST(KdTree, SingleRecordIsOneLeaf) {
  const auto db = build_database({rec("a", {1.0, 2.0})});
  const KdTree tree(db);
  EXPECT_EQ(tree.leaf_count(), 1u);
  EXPECT_EQ(tree.node_count(), 1u);
  const std::vector<double> v{0.0, 0.0};
  EXPECT_EQ(tree.query_ids(v, 1), std::vector<RecordId>{"a"});
}

TEST(KdTree, EveryRecordInExactlyOneLeaf) {
  std::mt19937_64 rng(1);
  for (std::size_t leaf : {1u, 3u, 16u}) {
    const auto db = build_database(oracle::random_records(rng, 237, 5));
    const KdTree tree(db, leaf);
    std::vector<int> seen(db.size(), 0);
    for (const auto& l : tree.leaves()) {
      EXPECT_LE(l.size(), leaf);
      EXPECT_FALSE(l.empty());
      for (auto i : l) ++seen[i];
    }
    for (int s : seen) EXPECT_EQ(s, 1);
  }
}

TEST(KdTree, MatchesLinearScan) {
  std::mt19937_64 rng(2);
  const auto recs = oracle::random_records(rng, 1000, 30);
  const auto db = build_database(recs);
  const KdTree tree(db);
  const auto queries = oracle::random_records(rng, 50, 30, "q");
  for (std::size_t k : {1u, 10u, 100u}) {
    for (const auto& q : queries) {
      EXPECT_EQ(tree.query_ids(q.values, k), oracle::linear_knn(recs, q.values, k));
    }
  }
}

TEST(KdTree, MatchesLinearScanLowDimensionAndWholeDatabase) {
  std::mt19937_64 rng(3);
  const auto recs = oracle::random_records(rng, 300, 2);
  const KdTree tree(build_database(recs), 4);
  const auto queries = oracle::random_records(rng, 30, 2, "q");
  for (const auto& q : queries) {
    EXPECT_EQ(tree.query_ids(q.values, 7), oracle::linear_knn(recs, q.values, 7));
    EXPECT_EQ(tree.query_ids(q.values, 300), oracle::linear_knn(recs, q.values, 300));
  }
}

TEST(KdTree, DuplicatePointsAllRetrievableInIdOrder) {
  std::vector<VectorRecord> recs;
  for (const char* id : {"e", "b", "d", "a", "c"}) recs.push_back(rec(id, {1.0, 1.0}));
  recs.push_back(rec("far", {9.0, 9.0}));
  const KdTree tree(build_database(recs), 1);
  const std::vector<double> v{1.0, 1.0};
  EXPECT_EQ(tree.query_ids(v, 5), (std::vector<RecordId>{"a", "b", "c", "d", "e"}));
  EXPECT_EQ(tree.query_ids(v, 2), (std::vector<RecordId>{"a", "b"}));
}

TEST(KdTree, SmallExamples) {
  const auto db = build_database({rec("p0", {0, 0}), rec("p1", {1, 1}), rec("p3", {3, 3})});
  const KdTree tree(db);
  const std::vector<double> v{0.9, 0.9};
  EXPECT_EQ(tree.query_ids(v, 1), std::vector<RecordId>{"p1"});
  const std::vector<double> on{3.0, 3.0};
  const auto nb = tree.query(on, 1);
  ASSERT_EQ(nb.size(), 1u);
  EXPECT_EQ(tree.id(nb[0].index), "p3");
  EXPECT_EQ(nb[0].distance, 0.0);
}

TEST(KdTree, Errors) {
  const auto db = build_database({rec("a", {0, 0}), rec("b", {1, 1})});
  EXPECT_THROW(KdTree(db, 0), InvalidArgument);
  const KdTree tree(db);
  const std::vector<double> v{0, 0};
  EXPECT_THROW(tree.query(v, 3), InvalidArgument);
  EXPECT_THROW(tree.query(v, 0), InvalidArgument);
  const std::vector<double> wrong{0};
  EXPECT_THROW(tree.query(wrong, 1), InvalidArgument);
}

TEST(KdTreePre, AveragesQueries) {
  const auto db = build_database(
      {rec("o", {0, 0}), rec("m", {1, 1}), rec("t", {2, 2}), rec("x", {1.2, 0.7})});
  const KdTree tree(db);
  const QuerySet q({rec("q0", {0, 0}), rec("q1", {2, 2})});
  EXPECT_EQ(kdtree_pre(q, tree, 1), std::vector<RecordId>{"m"});
}

TEST(KdTreePre, SingleQueryAndBruteForce) {
  std::mt19937_64 rng(4);
  const auto recs = oracle::random_records(rng, 400, 6);
  const KdTree tree(build_database(recs));
  for (int t = 0; t < 20; ++t) {
    const auto qs = oracle::random_records(rng, 1 + t % 5, 6, "q");
    const QuerySet q(qs);
    std::vector<double> mean(6, 0.0);
    for (const auto& r : qs) {
      for (std::size_t l = 0; l < 6; ++l) mean[l] += r.values[l];
    }
    for (auto& x : mean) x /= static_cast<double>(qs.size());
    EXPECT_EQ(kdtree_pre(q, tree, 25), oracle::linear_knn(recs, mean, 25));
    if (qs.size() == 1) EXPECT_EQ(kdtree_pre(q, tree, 25), tree.query_ids(qs[0].values, 25));
  }
}

TEST(KdTreePost, SingleQueryEqualsPlainQuery) {
  std::mt19937_64 rng(5);
  const auto recs = oracle::random_records(rng, 200, 4);
  const KdTree tree(build_database(recs));
  const auto qs = oracle::random_records(rng, 1, 4, "q");
  for (auto rank : {PostRank::kMin, PostRank::kMean}) {
    EXPECT_EQ(kdtree_post(QuerySet(qs), tree, 12, rank), tree.query_ids(qs[0].values, 12));
  }
}

TEST(KdTreePost, DuplicateQueriesAddNothing) {
  std::mt19937_64 rng(6);
  const auto recs = oracle::random_records(rng, 200, 4);
  const KdTree tree(build_database(recs));
  auto qs = oracle::random_records(rng, 1, 4, "q");
  qs.push_back(rec("q_copy", qs[0].values));
  EXPECT_EQ(kdtree_post(QuerySet(qs), tree, 9), tree.query_ids(qs[0].values, 9));
}

TEST(KdTreePost, MatchesBruteForceRule) {
  std::mt19937_64 rng(7);
  const auto recs = oracle::random_records(rng, 500, 8);
  const KdTree tree(build_database(recs));
  for (int t = 0; t < 20; ++t) {
    const auto qs = oracle::random_records(rng, 2 + t % 6, 8, "q");
    const QuerySet q(qs);
    EXPECT_EQ(kdtree_post(q, tree, 30, PostRank::kMin), brute_post(recs, qs, 30, true));
    EXPECT_EQ(kdtree_post(q, tree, 30, PostRank::kMean), brute_post(recs, qs, 30, false));
  }
}

TEST(BaselineK, Examples) {
  EXPECT_EQ(baseline_k(357, 64), 293u);
  EXPECT_EQ(baseline_k(300, 1), 299u);
  EXPECT_EQ(baseline_k(6000, 64), 5936u);
  EXPECT_THROW(baseline_k(10, 10), InvalidArgument);
  EXPECT_THROW(baseline_k(10, 11), InvalidArgument);
}

}  // namespace
}  // namespace mqscan
