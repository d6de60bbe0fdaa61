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

// Two-step multi-query retrieval by anomalous-pattern scanning.
//
//   1. Standardize the queries against the database and find the dimension
//      subset on which they are jointly low (rows fixed to Q, dims free).
//   2. Standardize the database against itself and find the records that are
//      jointly low on those dimensions (dims fixed, rows free).
//
// The retrieved set size falls out of the scan; it is never an input.

#ifndef MQSCAN_RETRIEVAL_HPP_
#define MQSCAN_RETRIEVAL_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "mqscan/core.hpp"
#include "mqscan/scanstats.hpp"

namespace mqscan {

struct RetrievalConfig {
  double alpha_max = kDefaultAlphaMax;
  double eps = kDefaultEps;
  std::size_t min_dims = 1;

  void validate() const;
};

struct DimensionScan {
  std::vector<std::size_t> dims;
  double score = 0.0;
  double alpha_star = 0.0;
  std::size_t n_total = 0;
  std::size_t n_below = 0;
};

DimensionScan step1_dimensions(const QuerySet& q, const VectorDatabase& db,
                               const RetrievalConfig& cfg = {});

/// Scans every database record on `dims`; fills the record-side fields of
/// the result (dims, retrieved_ids, score, alpha_star, n_total, n_below).
ScanResult step2_records(const VectorDatabase& db,
                         std::span<const std::size_t> dims,
                         const RetrievalConfig& cfg = {});

/// Step 1 then step 2. Query ids must not occur in the database.
ScanResult retrieve(const QuerySet& q, const VectorDatabase& db,
                    const RetrievalConfig& cfg = {});

}  // namespace mqscan

#endif  // MQSCAN_RETRIEVAL_HPP_
