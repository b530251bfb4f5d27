#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cra {

/// Two-sided Kolmogorov-Smirnov distance between the empirical CDF of
/// `samples` and `cdf`.
template <class Cdf>
double ks_statistic(std::vector<double> samples, Cdf&& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    worst = std::max({worst, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return worst;
}

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> counts;
  std::size_t total = 0;  // all samples, including those outside [lo, hi)

  double width() const { return (hi - lo) / static_cast<double>(counts.size()); }
  double center(std::size_t i) const { return lo + (static_cast<double>(i) + 0.5) * width(); }
  double density(std::size_t i) const {
    return total == 0 ? 0.0 : static_cast<double>(counts[i]) / (static_cast<double>(total) * width());
  }
  std::size_t mode_bin() const {
    return static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  }
};

inline Histogram make_histogram(std::span<const double> samples, double lo, double hi, std::size_t bins) {
  if (bins == 0 || !(hi > lo)) throw std::invalid_argument("make_histogram: empty range");
  Histogram h{lo, hi, std::vector<std::size_t>(bins, 0), samples.size()};
  const double w = h.width();
  for (double x : samples) {
    if (x < lo || x >= hi) continue;
    const auto i = std::min(bins - 1, static_cast<std::size_t>((x - lo) / w));
    ++h.counts[i];
  }
  return h;
}

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

namespace detail {

// [begin, end) of batch b when n items are split into k near-equal batches.
inline std::pair<std::size_t, std::size_t> batch_range(std::size_t n, std::size_t k, std::size_t b) {
  return {b * n / k, (b + 1) * n / k};
}

inline double spread_se(const std::vector<double>& batch_values) {
  const std::size_t k = batch_values.size();
  if (k < 2) return 0.0;
  double mean = 0.0;
  for (double v : batch_values) mean += v;
  mean /= static_cast<double>(k);
  double ss = 0.0;
  for (double v : batch_values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(k - 1) / static_cast<double>(k));
}

}  // namespace detail

inline constexpr std::size_t kDefaultBatches = 20;

/// Mean of `values` with a batched-means standard error over consecutive batches.
inline Estimate batched_mean(std::span<const double> values, std::size_t batches = kDefaultBatches) {
  if (values.empty()) throw std::invalid_argument("batched_mean: no values");
  const std::size_t k = std::min(batches, values.size());
  std::vector<double> means;
  double total = 0.0;
  for (std::size_t b = 0; b < k; ++b) {
    auto [lo, hi] = detail::batch_range(values.size(), k, b);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += values[i];
    total += s;
    means.push_back(s / static_cast<double>(hi - lo));
  }
  return {total / static_cast<double>(values.size()), detail::spread_se(means)};
}

/// Sum(num) / Sum(den) with a batched standard error. Batches with a zero
/// denominator carry no information and are skipped; 0 when Sum(den) == 0.
inline Estimate batched_ratio(std::span<const double> num, std::span<const double> den,
                              std::size_t batches = kDefaultBatches) {
  if (num.size() != den.size() || num.empty()) throw std::invalid_argument("batched_ratio: bad input");
  const std::size_t k = std::min(batches, num.size());
  std::vector<double> ratios;
  double sn = 0.0;
  double sd = 0.0;
  for (std::size_t b = 0; b < k; ++b) {
    auto [lo, hi] = detail::batch_range(num.size(), k, b);
    double bn = 0.0;
    double bd = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      bn += num[i];
      bd += den[i];
    }
    sn += bn;
    sd += bd;
    if (bd > 0.0) ratios.push_back(bn / bd);
  }
  if (sd == 0.0) return {0.0, 0.0};
  return {sn / sd, detail::spread_se(ratios)};
}

}  // namespace cra
