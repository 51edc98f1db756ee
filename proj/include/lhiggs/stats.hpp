// Copyright 2026 The lhiggs Authors.
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

// Error analysis for correlated Monte Carlo series: binning, jackknife over
// bins, and the weighted log-linear decay fit used by Wilson-loop scans.

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace lhiggs {

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  double autocorrelation_hint = 0.5;  // integrated autocorrelation time
};

/// Binned standard error: bin sizes double while at least `min_bins` bins
/// remain and the largest error over those levels is reported.
Estimate binned_estimate(std::span<const double> series, int min_bins = 8);

/// Means of `bins` contiguous blocks (trailing remainder dropped).
std::vector<double> block_means(std::span<const double> series, int bins);

/// Jackknife over `bins` blocks of a function of several jointly sampled
/// series (all of the same length).
Estimate jackknife(const std::vector<std::span<const double>>& series, int bins,
                   const std::function<double(std::span<const double>)>& f);

/// Neumaier-compensated sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }
  void merge(const CompensatedSum& o) {
    add(o.sum_);
    add(o.comp_);
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct LoopPoint {
  int perimeter = 0;
  int area = 0;
  double W = 0.0;
  double W_err = 0.0;
};

struct DecayFit {
  double c0 = 0.0;
  double c_perim = 0.0;
  double c_area = 0.0;
  double err_c0 = 0.0;
  double err_perim = 0.0;
  double err_area = 0.0;
  double cov_perim_area = 0.0;
  double chi2 = 0.0;
  std::vector<double> residuals;   // per used point, y - fit
  std::vector<std::size_t> used;
  std::vector<std::size_t> excluded;  // W <= 3 W_err
  /// (c_area - c_perim) / sd(c_area - c_perim); positive means area-dominant.
  double separation() const;
};

/// Least squares of -log W on (1, perimeter, area), weighted by the
/// propagated relative errors when all are positive. Requires at least four
/// usable points with distinct (perimeter, area) spanning a rank-3 design.
DecayFit decay_fit(std::span<const LoopPoint> points);

}  // namespace lhiggs
