// Copyright 2026 The subjidx Authors
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

#ifndef SUBJIDX_DISTFIT_HPP_
#define SUBJIDX_DISTFIT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "subjidx/error.hpp"
#include "subjidx/metrics.hpp"
#include "subjidx/text.hpp"

namespace subjidx::distfit {

using metrics::Histogram;
using metrics::LevelHistogram;
using metrics::RankTable;

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  std::size_t points = 0;
};

/// Ordinary least squares y = intercept + slope·x (centered two-pass sums).
/// Needs at least two distinct x values.
inline LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) {
    throw Error(ErrorCode::kInsufficientBins, "need at least 2 points, got " + std::to_string(n));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0) throw Error(ErrorCode::kInsufficientBins, "all x values are equal");
  LinearFit fit;
  fit.points = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy == 0) {
    fit.r_squared = 1.0;
  } else {
    fit.r_squared = std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  }
  return fit;
}

// ---------------------------------------------------------------------------
// Exponential: count(n) ~ exp(intercept - lambda·n)

struct ExponentialFit {
  double lambda = 0;
  double intercept = 0;
  double r_squared = 0;
  std::uint64_t nmin = 0;
  std::uint64_t nmax = 0;
  std::size_t bins_used = 0;
  std::size_t zero_bins_skipped = 0;

  double fitted(double n) const { return std::exp(intercept - lambda * n); }
};

inline ExponentialFit fit_exponential(const Histogram& hist, std::uint64_t nmin = 1,
                                      std::uint64_t nmax = 9) {
  std::vector<double> x, y;
  for (auto it = hist.bins.lower_bound(nmin); it != hist.bins.end() && it->first <= nmax; ++it) {
    x.push_back(static_cast<double>(it->first));
    y.push_back(std::log(static_cast<double>(it->second)));
  }
  if (x.size() < 2) {
    throw Error(ErrorCode::kInsufficientBins,
                "exponential fit over [" + std::to_string(nmin) + "," + std::to_string(nmax) +
                    "] has " + std::to_string(x.size()) + " non-empty bins");
  }
  LinearFit lf = least_squares(x, y);
  ExponentialFit f;
  f.lambda = -lf.slope;
  f.intercept = lf.intercept;
  f.r_squared = lf.r_squared;
  f.nmin = nmin;
  f.nmax = nmax;
  f.bins_used = x.size();
  f.zero_bins_skipped = static_cast<std::size_t>(nmax - nmin + 1) - x.size();
  return f;
}

// ---------------------------------------------------------------------------
// Power law: count(x) ~ exp(intercept)·x^(-exponent)

struct PowerLawFit {
  double exponent = 0;
  double intercept = 0;
  double r_squared = 0;
  std::uint64_t lo = 0;  // support, rank or value
  std::uint64_t hi = 0;
  std::size_t bins_used = 0;

  double fitted(double x) const { return std::exp(intercept - exponent * std::log(x)); }
};

inline PowerLawFit power_law_from(const std::vector<double>& x, const std::vector<double>& y,
                                  std::uint64_t lo, std::uint64_t hi) {
  std::vector<double> lx(x.size()), ly(y.size());
  std::transform(x.begin(), x.end(), lx.begin(), [](double v) { return std::log(v); });
  std::transform(y.begin(), y.end(), ly.begin(), [](double v) { return std::log(v); });
  LinearFit lf = least_squares(lx, ly);
  return {-lf.slope, lf.intercept, lf.r_squared, lo, hi, x.size()};
}

/// Regression of ln count on ln rank for ranks 1..kmax. Zero counts skipped.
inline PowerLawFit fit_power_law_ranks(std::span<const std::uint64_t> counts_by_rank,
                                       std::size_t kmax = 25) {
  std::vector<double> x, y;
  const std::size_t k = std::min(kmax, counts_by_rank.size());
  for (std::size_t i = 0; i < k; ++i) {
    if (counts_by_rank[i] == 0) continue;
    x.push_back(static_cast<double>(i + 1));
    y.push_back(static_cast<double>(counts_by_rank[i]));
  }
  if (x.size() < 2) {
    throw Error(ErrorCode::kInsufficientBins,
                "rank fit needs 2 ranks, got " + std::to_string(x.size()));
  }
  return power_law_from(x, y, 1, k);
}

inline PowerLawFit fit_power_law_ranks(const RankTable& table, std::size_t kmax = 25) {
  auto counts = table.counts();
  return fit_power_law_ranks(counts, kmax);
}

/// Regression of ln count on ln n over bins n >= nmin with count >= floor.
inline PowerLawFit fit_power_law_tail(const Histogram& hist, std::uint64_t nmin = 10,
                                      std::uint64_t floor = 5) {
  std::vector<double> x, y;
  std::uint64_t hi = nmin;
  for (auto it = hist.bins.lower_bound(std::max<std::uint64_t>(nmin, 1)); it != hist.bins.end();
       ++it) {
    if (it->second < floor) continue;
    x.push_back(static_cast<double>(it->first));
    y.push_back(static_cast<double>(it->second));
    hi = it->first;
  }
  if (x.size() < 2) {
    throw Error(ErrorCode::kInsufficientBins,
                "tail fit from n=" + std::to_string(nmin) + " has " + std::to_string(x.size()) +
                    " bins with count >= " + std::to_string(floor));
  }
  return power_law_from(x, y, nmin, hi);
}

// ---------------------------------------------------------------------------
// Normal with Kolmogorov-Smirnov check

inline double normal_cdf(double x, double mean, double sigma) {
  return 0.5 * std::erfc(-(x - mean) / (sigma * std::numbers::sqrt2));
}

inline double normal_pdf(double x, double mean, double sigma) {
  const double z = (x - mean) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2 * std::numbers::pi));
}

/// Kolmogorov survival function Q(t) = P(K > t). Series are cut once a term
/// drops below 1e-12.
inline double kolmogorov_q(double t) {
  if (t <= 0) return 1.0;
  constexpr double kEps = 1e-12;
  if (t < 1.18) {
    // P(K <= t) = sqrt(2π)/t · Σ exp(-(2j-1)²π²/(8t²))
    const double k = -std::numbers::pi * std::numbers::pi / (8 * t * t);
    double sum = 0;
    for (int j = 1; j < 1000; ++j) {
      const double term = std::exp(k * (2 * j - 1) * (2 * j - 1));
      sum += term;
      if (term < kEps) break;
    }
    return std::clamp(1.0 - std::sqrt(2 * std::numbers::pi) / t * sum, 0.0, 1.0);
  }
  // Q(t) = 2 Σ (-1)^(j-1) exp(-2j²t²)
  double sum = 0;
  for (int j = 1; j < 1000; ++j) {
    const double term = std::exp(-2.0 * j * j * t * t);
    sum += (j % 2 == 1) ? term : -term;
    if (term < kEps) break;
  }
  return std::clamp(2 * sum, 0.0, 1.0);
}

struct KsResult {
  double statistic = 0;
  double p = 1;
};

/// Edges at which binned integer data is compared with the model: the left
/// edge of the first non-empty bin and the right edge of every non-empty bin.
/// Bin k spans [k - 0.5, k + 0.5).
inline std::vector<std::pair<double, double>> ks_edges(const Histogram& sample) {
  std::vector<std::pair<double, double>> edges;  // x, empirical CDF
  if (sample.bins.empty()) return edges;
  edges.emplace_back(static_cast<double>(sample.bins.begin()->first) - 0.5, 0.0);
  std::uint64_t cum = 0;
  for (auto [k, c] : sample.bins) {
    cum += c;
    edges.emplace_back(static_cast<double>(k) + 0.5,
                       static_cast<double>(cum) / static_cast<double>(sample.total));
  }
  return edges;
}

inline KsResult ks_test(const Histogram& sample, double mean, double sigma) {
  if (!(sigma > 0) || !std::isfinite(sigma) || !std::isfinite(mean)) {
    throw Error(ErrorCode::kDegenerateDistribution, "sigma must be positive and finite");
  }
  if (sample.total == 0) throw Error(ErrorCode::kDegenerateDistribution, "empty sample");
  KsResult r;
  for (auto [x, emp] : ks_edges(sample)) {
    r.statistic = std::max(r.statistic, std::abs(emp - normal_cdf(x, mean, sigma)));
  }
  r.p = kolmogorov_q(std::sqrt(static_cast<double>(sample.total)) * r.statistic);
  return r;
}

struct NormalFit {
  double mean = 0;
  double sigma = 0;
  std::uint64_t n = 0;
  double ks_statistic = 0;
  double ks_p = 1;
  bool excluded_level0 = true;

  double expected(double level) const { return static_cast<double>(n) * normal_pdf(level, mean, sigma); }
};

/// Weighted population mean and standard deviation of the binned levels,
/// then a KS test against Normal(mean, sigma).
inline NormalFit fit_normal(const Histogram& levels, bool exclude_level0 = true) {
  Histogram used;
  for (auto [k, c] : levels.bins) {
    if (exclude_level0 && k == 0) continue;
    used.add(k, c);
  }
  if (used.bins.size() < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "normal fit needs 2 distinct levels, got " + std::to_string(used.bins.size()));
  }
  const double n = static_cast<double>(used.total);
  double mean = 0;
  for (auto [k, c] : used.bins) mean += static_cast<double>(k) * static_cast<double>(c);
  mean /= n;
  double var = 0;
  for (auto [k, c] : used.bins) {
    const double d = static_cast<double>(k) - mean;
    var += d * d * static_cast<double>(c);
  }
  var /= n;
  NormalFit f;
  f.mean = mean;
  f.sigma = std::sqrt(var);
  f.n = used.total;
  f.excluded_level0 = exclude_level0;
  KsResult ks = ks_test(used, f.mean, f.sigma);
  f.ks_statistic = ks.statistic;
  f.ks_p = ks.p;
  return f;
}

inline NormalFit fit_normal(const LevelHistogram& levels, bool exclude_level0 = true) {
  return fit_normal(levels.hist, exclude_level0);
}

// ---------------------------------------------------------------------------
// Exponential growth: count(t) ~ exp(intercept + slope·t)

struct GrowthPoint {
  double month = 0;
  double count = 0;
};

struct GrowthFit {
  double monthly_rate = 0;
  double r_squared = 0;
  double slope = 0;
  double intercept = 0;
  std::size_t points = 0;
};

inline GrowthFit fit_growth(std::span<const GrowthPoint> series) {
  if (series.size() < 2) {
    throw Error(ErrorCode::kInsufficientData, "growth fit needs 2 points");
  }
  std::vector<double> x, y;
  for (const auto& p : series) {
    if (!(p.count > 0)) {
      throw Error(ErrorCode::kNonPositiveCount,
                  "count at month " + text::format_sig(p.month, 6) + " is not positive");
    }
    x.push_back(p.month);
    y.push_back(std::log(p.count));
  }
  LinearFit lf;
  try {
    lf = least_squares(x, y);
  } catch (const Error&) {
    throw Error(ErrorCode::kInsufficientData, "growth fit needs 2 distinct months");
  }
  return {std::expm1(lf.slope), lf.r_squared, lf.slope, lf.intercept, series.size()};
}

}  // namespace subjidx::distfit

#endif  // SUBJIDX_DISTFIT_HPP_
