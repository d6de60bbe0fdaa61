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

#include "mqscan/scanstats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

namespace mqscan {

namespace {

void check_indices(std::span<const std::size_t> idx, std::size_t bound,
                   const char* what) {
  std::vector<bool> seen(bound, false);
  for (std::size_t i : idx) {
    if (i >= bound) {
      throw InvalidArgument(std::string(what) + " index " + std::to_string(i) +
                            " out of range (size " + std::to_string(bound) +
                            ")");
    }
    if (seen[i]) {
      throw InvalidArgument(std::string("duplicate ") + what + " index " +
                            std::to_string(i));
    }
    seen[i] = true;
  }
}

void check_alpha_max(double alpha_max) {
  if (!(alpha_max > 0.0 && alpha_max < 1.0)) {
    throw InvalidArgument("alpha_max must lie in (0, 1)");
  }
}

// a * ln(a / b) with the 0 * ln 0 = 0 limit. The quotient overflows when b
// is subnormal (the grid successor of p = 0), so fall back to a log difference.
double xlogx_over(double a, double b) {
  if (!(a > 0.0)) return 0.0;
  const double q = a / b;
  return a * (std::isfinite(q) ? std::log(q) : std::log(a) - std::log(b));
}

}  // namespace

double zscore(double value, double mean, double std, double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  if (!std::isfinite(value) || !std::isfinite(mean) || !std::isfinite(std)) {
    throw InvalidArgument("zscore inputs must be finite");
  }
  if (std < eps) return 0.0;
  return (value - mean) / std;
}

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0);
}

PValueMatrix pvalue_matrix(std::span<const VectorRecord> rows,
                           const VectorDatabase& db, double eps) {
  const std::size_t dim = db.dim();
  const auto mean = db.col_mean();
  const auto sd = db.col_std();
  std::vector<double> p;
  p.reserve(rows.size() * dim);
  std::vector<RecordId> ids;
  ids.reserve(rows.size());
  for (const auto& r : rows) {
    if (r.values.size() != dim) {
      throw DataError("record '" + r.id + "' has dimension " +
                      std::to_string(r.values.size()) +
                      ", database dimension is " + std::to_string(dim));
    }
    for (std::size_t l = 0; l < dim; ++l) {
      p.push_back(normal_cdf(zscore(r.values[l], mean[l], sd[l], eps)));
    }
    ids.push_back(r.id);
  }
  return PValueMatrix(rows.size(), dim, std::move(p), std::move(ids));
}

double berk_jones(double alpha, std::size_t n_alpha, std::size_t n) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("berk_jones: alpha must lie in (0, 1)");
  }
  if (n == 0) throw InvalidArgument("berk_jones: n must be at least 1");
  if (n_alpha > n) throw InvalidArgument("berk_jones: n_alpha exceeds n");
  const double r = static_cast<double>(n_alpha) / static_cast<double>(n);
  if (r <= alpha) return 0.0;
  const double kl = xlogx_over(r, alpha) + xlogx_over(1.0 - r, 1.0 - alpha);
  return static_cast<double>(n) * kl;
}

AlphaGrid::AlphaGrid(std::vector<double> alphas, double alpha_max)
    : alphas_(std::move(alphas)), alpha_max_(alpha_max) {
  check_alpha_max(alpha_max_);
  if (alphas_.empty()) throw InvalidArgument("alpha grid must not be empty");
  if (alphas_.back() != alpha_max_) {
    throw InvalidArgument("alpha grid must end at alpha_max");
  }
  for (std::size_t i = 0; i < alphas_.size(); ++i) {
    if (!(alphas_[i] > 0.0 && alphas_[i] <= alpha_max_)) {
      throw InvalidArgument("alpha grid entries must lie in (0, alpha_max]");
    }
    if (i > 0 && !(alphas_[i - 1] < alphas_[i])) {
      throw InvalidArgument("alpha grid must be strictly ascending");
    }
  }
}

AlphaGrid build_alpha_grid(const PValueMatrix& p,
                           std::span<const std::size_t> rows,
                           std::span<const std::size_t> dims,
                           double alpha_max) {
  check_alpha_max(alpha_max);
  check_indices(rows, p.rows(), "row");
  check_indices(dims, p.cols(), "dimension");
  // With strict p < alpha the count is constant on (p_k, p_k+1] and BJ falls
  // as alpha grows, so each interval peaks just above p_k: the next double.
  std::vector<double> alphas;
  for (std::size_t r : rows) {
    for (std::size_t l : dims) {
      const double v = p.at(r, l);
      if (v < alpha_max) {
        alphas.push_back(std::nextafter(v, std::numeric_limits<double>::infinity()));
      }
    }
  }
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
  if (alphas.empty() || alphas.back() != alpha_max) alphas.push_back(alpha_max);
  return AlphaGrid(std::move(alphas), alpha_max);
}

SubmatrixScore score_submatrix(const PValueMatrix& p,
                               std::span<const std::size_t> rows,
                               std::span<const std::size_t> dims,
                               const AlphaGrid& grid) {
  if (rows.empty() || dims.empty()) {
    throw InvalidArgument("score_submatrix: rows and dims must be non-empty");
  }
  check_indices(rows, p.rows(), "row");
  check_indices(dims, p.cols(), "dimension");

  std::vector<double> cells;
  cells.reserve(rows.size() * dims.size());
  for (std::size_t r : rows) {
    for (std::size_t l : dims) cells.push_back(p.at(r, l));
  }
  std::sort(cells.begin(), cells.end());

  SubmatrixScore best;
  best.n_total = cells.size();
  best.score = -1.0;
  for (double alpha : grid.alphas()) {
    const auto below = static_cast<std::size_t>(
        std::lower_bound(cells.begin(), cells.end(), alpha) - cells.begin());
    const double s = berk_jones(alpha, below, cells.size());
    if (s > best.score) {
      best.score = s;
      best.alpha_star = alpha;
      best.n_below = below;
    }
  }
  return best;
}

AxisScanOutcome scan_axis(const PValueMatrix& p, Axis fixed_axis,
                          std::span<const std::size_t> fixed_idx,
                          const AlphaGrid& grid, std::size_t min_chosen) {
  const bool rows_fixed = fixed_axis == Axis::kRows;
  const std::size_t fixed_bound = rows_fixed ? p.rows() : p.cols();
  const std::size_t n_free = rows_fixed ? p.cols() : p.rows();
  if (fixed_idx.empty()) throw InvalidArgument("scan_axis: empty fixed set");
  check_indices(fixed_idx, fixed_bound, rows_fixed ? "row" : "dimension");
  if (n_free == 0) throw InvalidArgument("scan_axis: free axis is empty");
  if (min_chosen == 0 || min_chosen > n_free) {
    throw InvalidArgument("scan_axis: min_chosen must lie in [1, free size]");
  }
  const std::size_t n_fixed = fixed_idx.size();
  const auto cell = [&](std::size_t fixed, std::size_t free) {
    return rows_fixed ? p.at(fixed, free) : p.at(free, fixed);
  };

  // Only cells below alpha_max can ever be counted.
  struct Cell {
    double p;
    std::size_t free;
  };
  std::vector<Cell> cells;
  for (std::size_t f : fixed_idx) {
    for (std::size_t j = 0; j < n_free; ++j) {
      const double v = cell(f, j);
      if (v < grid.alpha_max()) cells.push_back({v, j});
    }
  }
  std::sort(cells.begin(), cells.end(),
            [](const Cell& a, const Cell& b) { return a.p < b.p; });

  // count[j] = #{fixed i : p < alpha}; hist[c] = #{j : count[j] == c}.
  std::vector<std::size_t> count(n_free, 0);
  std::vector<std::size_t> hist(n_fixed + 1, 0);
  hist[0] = n_free;

  double best_score = -1.0;
  double best_alpha = 0.0;
  std::size_t best_len = 0;
  std::size_t best_below = 0;

  std::size_t next = 0;
  for (const double alpha : grid.alphas()) {
    for (; next < cells.size() && cells[next].p < alpha; ++next) {
      auto& c = count[cells[next].free];
      --hist[c];
      ++c;
      ++hist[c];
    }
    const auto consider = [&](std::size_t len, std::size_t below) {
      const double s = berk_jones(alpha, below, len * n_fixed);
      if (s > best_score || (s == best_score && alpha == best_alpha && len > best_len)) {
        best_score = s;
        best_alpha = alpha;
        best_len = len;
        best_below = below;
      }
    };
    std::size_t len = 0;
    std::size_t below = 0;
    for (std::size_t c = n_fixed + 1; c-- > 0;) {
      const std::size_t h = hist[c];
      if (h == 0) continue;
      const std::size_t prev_len = len;
      const std::size_t prev_below = below;
      len += h;
      below += c * h;
      if (prev_len < min_chosen && len > min_chosen) {
        consider(min_chosen, prev_below + c * (min_chosen - prev_len));
      }
      if (len >= min_chosen) consider(len, below);
    }
  }

  std::vector<std::size_t> final_count(n_free, 0);
  for (std::size_t f : fixed_idx) {
    for (std::size_t j = 0; j < n_free; ++j) {
      if (cell(f, j) < best_alpha) ++final_count[j];
    }
  }
  std::vector<std::size_t> order(n_free);
  for (std::size_t j = 0; j < n_free; ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return final_count[a] > final_count[b];
  });
  order.resize(best_len);
  std::sort(order.begin(), order.end());

  AxisScanOutcome out;
  out.chosen = std::move(order);
  out.score = best_score;
  out.alpha_star = best_alpha;
  out.n_total = best_len * n_fixed;
  out.n_below = best_below;
  return out;
}

}  // namespace mqscan
