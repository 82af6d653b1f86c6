#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "rmtsense/rmt_core.hpp"

namespace rmtsense::empirical {

double mean(std::span<const double> x);
/// Unbiased (n - 1) sample variance.
double variance(std::span<const double> x);

/// Linear-interpolation quantile of an unsorted sample, q in [0, 1].
double quantile(std::span<const double> x, double q);
double median(std::span<const double> x);

/// sup |F_n - F| over the sample points (both one-sided gaps checked).
double ks_distance(std::span<const double> x, const std::function<double(double)>& cdf);

/// Two-sample KS distance sup |F_n - G_m|.
double ks_distance_two_sample(std::span<const double> x, std::span<const double> y);

/// Spearman rank correlation; ties get the average rank.
double spearman(std::span<const double> x, std::span<const double> y);

/// Jarque-Bera statistic n/6 (S^2 + (K - 3)^2 / 4); asymptotically chi-square(2).
double jarque_bera(std::span<const double> x);
/// Upper tail of chi-square(2) at the JB statistic, exp(-JB/2).
double jarque_bera_pvalue(std::span<const double> x);

/// Sample autocorrelation at lag k (biased autocovariance over the lag-0 value).
double autocorrelation(std::span<const double> x, std::size_t lag);

std::vector<double> moduli(std::span<const Complex> values);

/// Sum over bins of |empirical mass - expected mass|; `edges` has one more
/// entry than `expected`. Samples outside the edges count as unmatched mass.
double binned_l1_distance(std::span<const double> x, std::span<const double> edges,
                          std::span<const double> expected);

}  // namespace rmtsense::empirical
