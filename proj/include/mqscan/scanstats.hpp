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

// Standardization and the non-parametric scan statistic.
//
// Every vector coordinate is mapped to a lower-tail p-value Phi(z) against the
// database column statistics. A subset S of (record, dimension) cells is
// scored by
//
//   F(S) = max_alpha BJ(alpha, N_alpha(S), N(S)),
//
// where N_alpha counts cells with p < alpha and BJ is the Berk-Jones
// statistic n * KL(N_alpha / n, alpha), clamped to zero unless the observed
// fraction exceeds alpha.

#ifndef MQSCAN_SCANSTATS_HPP_
#define MQSCAN_SCANSTATS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "mqscan/core.hpp"

namespace mqscan {

inline constexpr double kDefaultAlphaMax = 0.5;
inline constexpr double kDefaultEps = 1e-12;

/// (value - mean) / std, or 0 when std < eps (constant dimension).
double zscore(double value, double mean, double std, double eps = kDefaultEps);

/// Standard normal CDF.
double normal_cdf(double z);

/// p[m][l] = Phi(zscore(rows[m][l], mean_l, std_l)) against `db` statistics.
PValueMatrix pvalue_matrix(std::span<const VectorRecord> rows,
                           const VectorDatabase& db, double eps = kDefaultEps);

/// Berk-Jones statistic for `n_alpha` of `n` p-values below `alpha`.
double berk_jones(double alpha, std::size_t n_alpha, std::size_t n);

/// Ascending candidate significance levels, always ending at alpha_max.
class AlphaGrid {
 public:
  AlphaGrid(std::vector<double> alphas, double alpha_max);

  std::span<const double> alphas() const { return alphas_; }
  double alpha_max() const { return alpha_max_; }
  std::size_t size() const { return alphas_.size(); }

 private:
  std::vector<double> alphas_;
  double alpha_max_;
};

/// For every distinct p-value below alpha_max inside rows x dims, the
/// smallest double above it; then alpha_max. Counting is strict (p < alpha),
/// so the score is piecewise decreasing in alpha between observed p-values
/// and these candidates attain its maximum over (0, alpha_max].
AlphaGrid build_alpha_grid(const PValueMatrix& p,
                           std::span<const std::size_t> rows,
                           std::span<const std::size_t> dims,
                           double alpha_max = kDefaultAlphaMax);

struct SubmatrixScore {
  double score = 0.0;
  double alpha_star = 0.0;
  std::size_t n_below = 0;
  std::size_t n_total = 0;
};

/// F(rows x dims) over `grid`; ties go to the smaller alpha.
SubmatrixScore score_submatrix(const PValueMatrix& p,
                               std::span<const std::size_t> rows,
                               std::span<const std::size_t> dims,
                               const AlphaGrid& grid);

enum class Axis { kRows, kDims };

struct AxisScanOutcome {
  std::vector<std::size_t> chosen;  // sorted ascending
  double score = 0.0;
  double alpha_star = 0.0;
  std::size_t n_total = 0;
  std::size_t n_below = 0;
};

/// Holds `fixed_idx` along `fixed_axis` and finds the subset of the other
/// axis maximizing F, exactly, over all subsets of size >= `min_chosen`.
///
/// For a fixed alpha the optimum is a prefix of free elements sorted by
/// their count of sub-alpha p-values (linear-time subset scanning). Elements
/// with equal counts form contiguous groups, and BJ is jointly convex in
/// (N_alpha, N), so along a group it peaks at an endpoint: only group
/// boundaries (and the min_chosen cut) need scoring. Ties prefer smaller
/// alpha, then the longer prefix.
AxisScanOutcome scan_axis(const PValueMatrix& p, Axis fixed_axis,
                          std::span<const std::size_t> fixed_idx,
                          const AlphaGrid& grid, std::size_t min_chosen = 1);

}  // namespace mqscan

#endif  // MQSCAN_SCANSTATS_HPP_
