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

#include "mqscan/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_set>
#include <utility>

namespace mqscan {

namespace {

void check_finite(const VectorRecord& r) {
  for (double v : r.values) {
    if (!std::isfinite(v)) {
      throw DataError("record '" + r.id + "' has a non-finite value");
    }
  }
}

// Uniform integer in [0, bound) from raw mt19937_64 output.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

std::optional<std::size_t> VectorDatabase::index_of(const RecordId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VectorDatabase build_database(std::vector<VectorRecord> records) {
  if (records.empty()) {
    throw InvalidArgument("cannot build a database from zero records");
  }
  const std::size_t dim = records.front().values.size();
  if (dim == 0) throw DataError("records must have at least one dimension");

  VectorDatabase db;
  db.index_.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.values.size() != dim) {
      throw DataError("record '" + r.id + "' has dimension " +
                      std::to_string(r.values.size()) + ", expected " +
                      std::to_string(dim));
    }
    check_finite(r);
    if (!db.index_.emplace(r.id, i).second) {
      throw DataError("duplicate record id '" + r.id + "'");
    }
  }

  const auto n = static_cast<double>(records.size());
  db.col_mean_.assign(dim, 0.0);
  db.col_std_.assign(dim, 0.0);
  for (const auto& r : records) {
    for (std::size_t l = 0; l < dim; ++l) db.col_mean_[l] += r.values[l];
  }
  for (auto& m : db.col_mean_) m /= n;
  for (const auto& r : records) {
    for (std::size_t l = 0; l < dim; ++l) {
      const double d = r.values[l] - db.col_mean_[l];
      db.col_std_[l] += d * d;
    }
  }
  for (auto& s : db.col_std_) s = std::sqrt(s / n);

  db.dim_ = dim;
  db.records_ = std::move(records);
  return db;
}

QuerySet::QuerySet(std::vector<VectorRecord> records)
    : records_(std::move(records)) {
  if (records_.empty()) throw InvalidArgument("query set must not be empty");
  const std::size_t dim = records_.front().values.size();
  std::unordered_set<RecordId> seen;
  for (const auto& r : records_) {
    if (r.values.size() != dim) {
      throw DataError("query '" + r.id + "' has dimension " +
                      std::to_string(r.values.size()) + ", expected " +
                      std::to_string(dim));
    }
    check_finite(r);
    if (!seen.insert(r.id).second) {
      throw DataError("duplicate query id '" + r.id + "'");
    }
  }
}

PValueMatrix::PValueMatrix(std::size_t rows, std::size_t cols,
                           std::vector<double> p, std::vector<RecordId> row_ids)
    : rows_(rows), cols_(cols), p_(std::move(p)), row_ids_(std::move(row_ids)) {
  if (p_.size() != rows_ * cols_) {
    throw InvalidArgument("p-value buffer size does not match rows x cols");
  }
  if (row_ids_.size() != rows_) {
    throw InvalidArgument("row_ids size does not match row count");
  }
  for (double v : p_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidArgument("p-values must lie in [0, 1]");
    }
  }
}

std::size_t class_size(std::span<const VectorRecord> corpus,
                       const std::string& label) {
  return static_cast<std::size_t>(
      std::count_if(corpus.begin(), corpus.end(),
                    [&](const VectorRecord& r) { return r.label == label; }));
}

ClassSplit split_by_class(std::span<const VectorRecord> corpus,
                          const std::string& class_c, std::size_t m,
                          std::uint64_t seed) {
  if (m == 0) throw InvalidArgument("query set size m must be at least 1");
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].label == class_c) members.push_back(i);
  }
  if (members.empty()) {
    throw InvalidArgument("unknown class label '" + class_c + "'");
  }
  if (m > members.size()) {
    throw InvalidArgument("m = " + std::to_string(m) + " exceeds size " +
                          std::to_string(members.size()) + " of class '" +
                          class_c + "'");
  }

  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < m; ++i) {
    const auto j = i + uniform_below(rng, members.size() - i);
    std::swap(members[i], members[j]);
  }

  std::vector<bool> is_query(corpus.size(), false);
  std::vector<VectorRecord> queries;
  queries.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    is_query[members[i]] = true;
    queries.push_back(corpus[members[i]]);
  }

  std::vector<VectorRecord> rest;
  std::vector<RecordId> positives;
  rest.reserve(corpus.size() - m);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (is_query[i]) continue;
    if (corpus[i].label == class_c) positives.push_back(corpus[i].id);
    rest.push_back(corpus[i]);
  }
  if (rest.empty()) {
    throw InvalidArgument("split leaves an empty database");
  }
  return ClassSplit{QuerySet(std::move(queries)), build_database(std::move(rest)),
                    std::move(positives)};
}

}  // namespace mqscan
