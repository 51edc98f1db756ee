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

#include "lhiggs/stats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "lhiggs/errors.hpp"

namespace lhiggs {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

std::vector<double> block_means(std::span<const double> series, int bins) {
  if (bins < 1) throw InvalidInput("bin count must be >= 1");
  const std::size_t per = series.size() / static_cast<std::size_t>(bins);
  if (per == 0) throw InvalidInput("insufficient samples for requested bins");
  std::vector<double> out(static_cast<std::size_t>(bins));
  for (int b = 0; b < bins; ++b) {
    CompensatedSum s;
    for (std::size_t i = 0; i < per; ++i) s.add(series[b * per + i]);
    out[b] = s.value() / static_cast<double>(per);
  }
  return out;
}

namespace {

double sem(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (n - 1.0) / n);
}

}  // namespace

Estimate binned_estimate(std::span<const double> series, int min_bins) {
  if (min_bins < 2) throw InvalidInput("need at least two bins");
  if (series.size() < static_cast<std::size_t>(min_bins)) {
    throw InvalidInput("insufficient samples for requested bins");
  }
  Estimate e;
  e.n_samples = series.size();
  CompensatedSum s;
  for (double x : series) s.add(x);
  e.mean = s.value() / static_cast<double>(series.size());

  std::vector<double> level(series.begin(), series.end());
  const double naive = sem(level);
  double worst = naive;
  while (level.size() / 2 >= static_cast<std::size_t>(min_bins)) {
    std::vector<double> next(level.size() / 2);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = 0.5 * (level[2 * i] + level[2 * i + 1]);
    level = std::move(next);
    worst = std::max(worst, sem(level));
  }
  e.std_error = worst;
  e.autocorrelation_hint = naive > 0.0 ? 0.5 * (worst / naive) * (worst / naive) : 0.5;
  return e;
}

Estimate jackknife(const std::vector<std::span<const double>>& series, int bins,
                   const std::function<double(std::span<const double>)>& f) {
  if (series.empty()) throw InvalidInput("jackknife needs at least one series");
  if (bins < 2) throw InvalidInput("jackknife needs at least two bins");
  const std::size_t n = series.front().size();
  for (const auto& s : series) {
    if (s.size() != n) throw InvalidInput("jackknife series lengths differ");
  }
  const std::size_t k = series.size();
  std::vector<std::vector<double>> bm(k);
  std::vector<double> totals(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    bm[i] = block_means(series[i], bins);
    for (double v : bm[i]) totals[i] += v;
  }
  std::vector<double> full(k);
  for (std::size_t i = 0; i < k; ++i) full[i] = totals[i] / bins;

  std::vector<double> loo(static_cast<std::size_t>(bins));
  std::vector<double> args(k);
  for (int b = 0; b < bins; ++b) {
    for (std::size_t i = 0; i < k; ++i) args[i] = (totals[i] - bm[i][b]) / (bins - 1);
    loo[b] = f(args);
  }
  double mean_loo = 0.0;
  for (double v : loo) mean_loo += v;
  mean_loo /= bins;
  double ss = 0.0;
  for (double v : loo) ss += (v - mean_loo) * (v - mean_loo);

  Estimate e;
  e.mean = f(full);
  e.std_error = std::sqrt(ss * (bins - 1.0) / bins);
  e.n_samples = n;
  return e;
}

double DecayFit::separation() const {
  const double var = err_area * err_area + err_perim * err_perim - 2.0 * cov_perim_area;
  if (!(var > 0.0)) return 0.0;
  return (c_area - c_perim) / std::sqrt(var);
}

DecayFit decay_fit(std::span<const LoopPoint> points) {
  DecayFit fit;
  std::vector<std::size_t> use;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const LoopPoint& p = points[i];
    if (p.perimeter <= 0 || p.area < 0 || p.W_err < 0.0) {
      throw InvalidInput("decay_fit: invalid loop point");
    }
    if (!(p.W > 3.0 * p.W_err) || !(p.W > 0.0)) {
      fit.excluded.push_back(i);
    } else {
      use.push_back(i);
    }
  }
  std::set<std::pair<int, int>> distinct;
  for (std::size_t i : use) distinct.emplace(points[i].perimeter, points[i].area);
  if (use.size() < 4 || distinct.size() < 4) {
    throw InvalidInput("decay_fit needs at least 4 usable loops with distinct (perimeter, area)");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(use.size());
  Eigen::MatrixXd X(n, 3);
  Eigen::VectorXd y(n), w(n);
  bool weighted = true;
  for (Eigen::Index r = 0; r < n; ++r) {
    const LoopPoint& p = points[use[r]];
    X(r, 0) = 1.0;
    X(r, 1) = p.perimeter;
    X(r, 2) = p.area;
    y(r) = -std::log(p.W);
    const double sy = p.W_err / p.W;
    if (!(sy > 0.0)) weighted = false;
    w(r) = sy > 0.0 ? 1.0 / (sy * sy) : 0.0;
  }
  if (!weighted) w.setOnes();

  const Eigen::MatrixXd XtW = X.transpose() * w.asDiagonal();
  const Eigen::Matrix3d A = XtW * X;
  Eigen::FullPivLU<Eigen::Matrix3d> lu(A);
  if (lu.rank() < 3) throw InvalidInput("decay_fit design is rank deficient");
  const Eigen::Vector3d coef = lu.solve(XtW * y);
  const Eigen::VectorXd res = y - X * coef;
  fit.chi2 = res.dot(w.asDiagonal() * res);
  const double dof = static_cast<double>(n - 3);
  Eigen::Matrix3d cov = lu.inverse();
  if (!weighted) {
    // Ordinary least squares: residual variance sets the scale.
    cov *= dof > 0 ? fit.chi2 / dof : 0.0;
  } else if (dof > 0 && fit.chi2 / dof > 1.0) {
    // Inflate when the scatter exceeds the quoted errors.
    cov *= fit.chi2 / dof;
  }
  fit.c0 = coef(0);
  fit.c_perim = coef(1);
  fit.c_area = coef(2);
  fit.err_c0 = std::sqrt(std::max(0.0, cov(0, 0)));
  fit.err_perim = std::sqrt(std::max(0.0, cov(1, 1)));
  fit.err_area = std::sqrt(std::max(0.0, cov(2, 2)));
  fit.cov_perim_area = cov(1, 2);
  fit.residuals.assign(res.data(), res.data() + n);
  fit.used = std::move(use);
  return fit;
}

}  // namespace lhiggs
