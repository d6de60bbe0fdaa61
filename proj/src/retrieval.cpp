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

#include "mqscan/retrieval.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace mqscan {

namespace {

std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

}  // namespace

void RetrievalConfig::validate() const {
  if (!(alpha_max > 0.0 && alpha_max < 1.0)) {
    throw InvalidArgument("alpha_max must lie in (0, 1)");
  }
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  if (min_dims < 1) throw InvalidArgument("min_dims must be at least 1");
}

DimensionScan step1_dimensions(const QuerySet& q, const VectorDatabase& db,
                               const RetrievalConfig& cfg) {
  cfg.validate();
  if (q.dim() != db.dim()) {
    throw DataError("query dimension " + std::to_string(q.dim()) +
                    " does not match database dimension " +
                    std::to_string(db.dim()));
  }
  if (cfg.min_dims > db.dim()) {
    throw InvalidArgument("min_dims exceeds the vector dimension");
  }
  const PValueMatrix p = pvalue_matrix(q.records(), db, cfg.eps);
  const auto rows = iota_indices(p.rows());
  const auto dims = iota_indices(p.cols());
  const AlphaGrid grid = build_alpha_grid(p, rows, dims, cfg.alpha_max);
  AxisScanOutcome o = scan_axis(p, Axis::kRows, rows, grid, cfg.min_dims);
  return {std::move(o.chosen), o.score, o.alpha_star, o.n_total, o.n_below};
}

ScanResult step2_records(const VectorDatabase& db,
                         std::span<const std::size_t> dims,
                         const RetrievalConfig& cfg) {
  cfg.validate();
  if (dims.empty()) throw InvalidArgument("step2_records: empty dimension set");
  if (db.size() == 0) throw InvalidArgument("step2_records: empty database");
  const PValueMatrix p = pvalue_matrix(db.records(), db, cfg.eps);
  const auto rows = iota_indices(p.rows());
  const AlphaGrid grid = build_alpha_grid(p, rows, dims, cfg.alpha_max);
  const AxisScanOutcome o = scan_axis(p, Axis::kDims, dims, grid);

  ScanResult r;
  r.dims.assign(dims.begin(), dims.end());
  std::sort(r.dims.begin(), r.dims.end());
  r.retrieved_ids.reserve(o.chosen.size());
  for (std::size_t i : o.chosen) r.retrieved_ids.push_back(db.record(i).id);
  r.score = o.score;
  r.alpha_star = o.alpha_star;
  r.n_total = o.n_total;
  r.n_below = o.n_below;
  return r;
}

ScanResult retrieve(const QuerySet& q, const VectorDatabase& db,
                    const RetrievalConfig& cfg) {
  for (const auto& r : q.records()) {
    if (db.contains(r.id)) {
      throw InvalidArgument("query id '" + r.id + "' is also a database id");
    }
  }
  const DimensionScan s1 = step1_dimensions(q, db, cfg);
  ScanResult out = step2_records(db, s1.dims, cfg);
  out.dims_score = s1.score;
  out.dims_alpha_star = s1.alpha_star;
  return out;
}

}  // namespace mqscan
