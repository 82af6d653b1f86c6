#include "rmtsense/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rmtsense/error.hpp"

namespace rmtsense::empirical {
namespace {

void require_samples(std::span<const double> x, std::size_t minimum) {
  if (x.size() < minimum) {
    raise(ErrorCode::InvalidArgument, "need at least " + std::to_string(minimum) +
                                          " samples, got " + std::to_string(x.size()));
  }
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) raise(ErrorCode::Domain, "correlation of a constant sample");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

double mean(std::span<const double> x) {
  require_samples(x, 1);
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  require_samples(x, 2);
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

double quantile(std::span<const double> x, double q) {
  require_samples(x, 1);
  if (!(q >= 0.0 && q <= 1.0)) raise(ErrorCode::InvalidArgument, "quantile must be in [0, 1]");
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double median(std::span<const double> x) { return quantile(x, 0.5); }

double ks_distance(std::span<const double> x, const std::function<double(double)>& cdf) {
  require_samples(x, 1);
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_distance_two_sample(std::span<const double> x, std::span<const double> y) {
  require_samples(x, 1);
  require_samples(y, 1);
  std::vector<double> a(x.begin(), x.end());
  std::vector<double> b(y.begin(), y.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) raise(ErrorCode::InvalidArgument, "spearman needs equal-length samples");
  require_samples(x, 2);
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  return pearson(rx, ry);
}

double jarque_bera(std::span<const double> x) {
  require_samples(x, 4);
  const double n = static_cast<double>(x.size());
  const double m = mean(x);
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  for (double v : x) {
    const double d = v - m;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 == 0.0) raise(ErrorCode::Domain, "Jarque-Bera of a constant sample");
  const double skew = m3 / std::pow(m2, 1.5);
  const double kurt = m4 / (m2 * m2);
  return n / 6.0 * (skew * skew + 0.25 * (kurt - 3.0) * (kurt - 3.0));
}

double jarque_bera_pvalue(std::span<const double> x) { return std::exp(-0.5 * jarque_bera(x)); }

double autocorrelation(std::span<const double> x, std::size_t lag) {
  require_samples(x, lag + 2);
  const double m = mean(x);
  double c0 = 0.0;
  for (double v : x) c0 += (v - m) * (v - m);
  double ck = 0.0;
  for (std::size_t i = lag; i < x.size(); ++i) ck += (x[i] - m) * (x[i - lag] - m);
  if (c0 == 0.0) raise(ErrorCode::Domain, "autocorrelation of a constant series");
  return ck / c0;
}

std::vector<double> moduli(std::span<const Complex> values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const Complex& z : values) out.push_back(std::abs(z));
  return out;
}

double binned_l1_distance(std::span<const double> x, std::span<const double> edges,
                          std::span<const double> expected) {
  require_samples(x, 1);
  if (edges.size() != expected.size() + 1 || expected.empty()) {
    raise(ErrorCode::InvalidArgument, "need one more edge than expected bin masses");
  }
  std::vector<double> counts(expected.size(), 0.0);
  double outside = 0.0;
  for (double v : x) {
    if (v < edges.front() || v > edges.back()) {
      outside += 1.0;
      continue;
    }
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    auto k = static_cast<std::size_t>(std::distance(edges.begin(), it));
    k = std::clamp<std::size_t>(k, 1, expected.size()) - 1;
    counts[k] += 1.0;
  }
  const double n = static_cast<double>(x.size());
  double l1 = outside / n;
  for (std::size_t k = 0; k < expected.size(); ++k) l1 += std::abs(counts[k] / n - expected[k]);
  return l1;
}

}  // namespace rmtsense::empirical
