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

#ifndef MQSCAN_CORE_HPP_
#define MQSCAN_CORE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace mqscan {

/// Caller-visible precondition violation (bad parameter, inconsistent sizes).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input data that cannot be used: malformed files, non-finite values,
/// duplicate ids.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using RecordId = std::string;

/// One labeled L-dimensional vector, either a database item or a query.
struct VectorRecord {
  RecordId id;
  std::optional<std::string> label;
  std::vector<double> values;
};

/// Immutable record collection with per-dimension mean and population
/// standard deviation. Construct through build_database().
class VectorDatabase {
 public:
  std::size_t size() const { return records_.size(); }
  std::size_t dim() const { return dim_; }
  const std::vector<VectorRecord>& records() const { return records_; }
  const VectorRecord& record(std::size_t i) const { return records_.at(i); }
  std::span<const double> col_mean() const { return col_mean_; }
  std::span<const double> col_std() const { return col_std_; }

  bool contains(const RecordId& id) const { return index_.contains(id); }
  std::optional<std::size_t> index_of(const RecordId& id) const;

 private:
  friend VectorDatabase build_database(std::vector<VectorRecord> records);
  VectorDatabase() = default;

  std::vector<VectorRecord> records_;
  std::size_t dim_ = 0;
  std::vector<double> col_mean_;
  std::vector<double> col_std_;
  std::unordered_map<RecordId, std::size_t> index_;
};

/// Builds a database and its column statistics (population std, divisor N).
/// Throws InvalidArgument for an empty collection, DataError for dimension
/// mismatch, non-finite values or duplicate ids.
VectorDatabase build_database(std::vector<VectorRecord> records);

/// Non-empty set of query vectors sharing one dimension.
class QuerySet {
 public:
  explicit QuerySet(std::vector<VectorRecord> records);

  std::size_t size() const { return records_.size(); }
  std::size_t dim() const { return records_.front().values.size(); }
  const std::vector<VectorRecord>& records() const { return records_; }

 private:
  std::vector<VectorRecord> records_;
};

/// Row-major matrix of lower-tail p-values, one row per scored record.
class PValueMatrix {
 public:
  PValueMatrix(std::size_t rows, std::size_t cols, std::vector<double> p,
               std::vector<RecordId> row_ids);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double at(std::size_t r, std::size_t c) const { return p_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(p_).subspan(r * cols_, cols_);
  }
  std::span<const double> data() const { return p_; }
  const std::vector<RecordId>& row_ids() const { return row_ids_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> p_;
  std::vector<RecordId> row_ids_;
};

/// S = V_S x O_S: the vector ids and dimension indices of a scored subset.
struct Subset {
  std::vector<RecordId> row_ids;
  std::vector<std::size_t> dims;
};

/// Outcome of the two-step retrieval.
struct ScanResult {
  std::vector<std::size_t> dims;       // O*_S, ascending
  std::vector<RecordId> retrieved_ids; // R*, in database order
  double score = 0.0;
  double alpha_star = 0.0;
  std::size_t n_total = 0;
  std::size_t n_below = 0;
  // Step-1 statistics for the chosen dimensions.
  double dims_score = 0.0;
  double dims_alpha_star = 0.0;

  Subset subset() const { return {retrieved_ids, dims}; }
};

/// Query/database split of one labeled corpus for a class of interest.
struct ClassSplit {
  QuerySet queries;
  VectorDatabase database;
  std::vector<RecordId> positives;  // remaining class members, database order
};

/// Draws `m` records of class `class_c` uniformly without replacement as the
/// query set; every other record forms the database.
///
/// Sampling is a partial Fisher-Yates shuffle over the class members in corpus
/// order, driven by std::mt19937_64 seeded with `seed`. Each swap index in
/// [i, n) is drawn by rejection sampling on the raw 64-bit output, so draws
/// are identical on every conforming standard library.
ClassSplit split_by_class(std::span<const VectorRecord> corpus,
                          const std::string& class_c, std::size_t m,
                          std::uint64_t seed);

/// Number of records in `corpus` carrying `label`.
std::size_t class_size(std::span<const VectorRecord> corpus,
                       const std::string& label);

}  // namespace mqscan

#endif  // MQSCAN_CORE_HPP_
