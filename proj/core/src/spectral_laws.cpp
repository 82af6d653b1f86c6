#include "rmtsense/spectral_laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rmtsense/error.hpp"

namespace rmtsense {
namespace {

constexpr std::size_t kSeriesCap = 100000;
constexpr double kSeriesRelTol = 1e-15;
constexpr std::size_t kMaxGinibreFactors = 8;

bool is_non_positive_integer(double v) { return v <= 0.0 && v == std::floor(v); }

}  // namespace

RingLawParams::RingLawParams(double c, std::size_t factors) : c_(c), factors_(factors) {
  if (!(c > 0.0 && c <= 1.0)) {
    raise(ErrorCode::InvalidArgument, "ring law needs c = N/T in (0, 1], got " + std::to_string(c));
  }
  if (factors == 0) raise(ErrorCode::InvalidArgument, "ring law needs L >= 1");
}

double ring_inner_radius(const RingLawParams& params) {
  return std::pow(1.0 - params.c(), 0.5 * static_cast<double>(params.factors()));
}

double ring_radial_pdf(double r, const RingLawParams& params) {
  if (!(r >= ring_inner_radius(params) && r <= 1.0)) return 0.0;
  const double l = static_cast<double>(params.factors());
  return 2.0 / (params.c() * l) * std::pow(r, 2.0 / l - 1.0);
}

double ring_radial_cdf(double r, const RingLawParams& params) {
  if (r <= 0.0) return 0.0;
  const double l = static_cast<double>(params.factors());
  const double u = std::pow(r, 2.0 / l);
  return std::clamp((u - (1.0 - params.c())) / params.c(), 0.0, 1.0);
}

MpSupport mp_support(double c) {
  const double root = std::sqrt(c);
  return {(1.0 - root) * (1.0 - root), (1.0 + root) * (1.0 + root)};
}

double mp_pdf(double x, double c) {
  if (!(c >= 1.0)) {
    raise(ErrorCode::UnsupportedConvention,
          "mp_pdf uses c = n/p >= 1; got c = " + std::to_string(c));
  }
  const auto [a, b] = mp_support(c);
  if (x < a || x > b) return 0.0;
  if (x == 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(std::max(0.0, (b - x) * (x - a))) / (2.0 * std::numbers::pi * x);
}

double ginibre_support_max(std::size_t k) {
  if (k == 0) raise(ErrorCode::InvalidArgument, "factor count k must be >= 1");
  const double kd = static_cast<double>(k);
  return std::pow(kd + 1.0, kd + 1.0) / std::pow(kd, kd);
}

GinibreProductParams::GinibreProductParams(std::size_t factors)
    : k(factors), support_max(ginibre_support_max(factors)) {}

double ginibre_product_pdf_k2(double x) {
  constexpr double kEdge = 27.0 / 4.0;
  if (x < 0.0 || x > kEdge) return 0.0;
  if (x == 0.0) return std::numeric_limits<double>::infinity();
  const double cbrt2 = std::cbrt(2.0);
  const double t = 27.0 + 3.0 * std::sqrt(std::max(0.0, 81.0 - 12.0 * x));
  const double cx = std::cbrt(x);
  const double bracket = cbrt2 * std::cbrt(t * t) - 6.0 * cx;
  const double prefactor = cbrt2 * std::sqrt(3.0) / (12.0 * std::numbers::pi);
  // cx * cx rather than cbrt(x * x): x * x underflows below 1e-154.
  return std::max(0.0, prefactor * bracket / (cx * cx * std::cbrt(t)));
}

double hypergeometric_pfq(std::span<const double> a, std::span<const double> b, double x) {
  for (double bj : b) {
    if (is_non_positive_integer(bj)) {
      raise(ErrorCode::InvalidArgument,
            "hypergeometric lower parameter " + std::to_string(bj) + " is a pole");
    }
  }
  if (x == 0.0) return 1.0;
  bool terminating = false;
  for (double aj : a) terminating = terminating || is_non_positive_integer(aj);
  if (!terminating) {
    if (a.size() > b.size() + 1) {
      raise(ErrorCode::NumericalFailure, "pFq with p > q + 1 diverges for x != 0");
    }
    if (a.size() == b.size() + 1 && std::abs(x) > 1.0) {
      raise(ErrorCode::NumericalFailure,
            "pFq with p = q + 1 diverges for |x| > 1 (x = " + std::to_string(x) + ")");
    }
  }

  double term = 1.0;
  double sum = 1.0;
  double previous_magnitude = 1.0;
  for (std::size_t m = 0; m < kSeriesCap; ++m) {
    const double md = static_cast<double>(m);
    double ratio = x / (md + 1.0);
    for (double aj : a) ratio *= aj + md;
    for (double bj : b) ratio /= bj + md;
    previous_magnitude = std::abs(term);
    term *= ratio;
    sum += term;
    if (term == 0.0 || std::abs(term) < kSeriesRelTol * std::abs(sum)) return sum;
  }
  // Hitting the cap on a convergent series (|x| near 1) is accepted; growing
  // terms are not.
  if (!std::isfinite(sum) || std::abs(term) >= previous_magnitude) {
    raise(ErrorCode::NumericalFailure,
          "pFq series not converging after " + std::to_string(kSeriesCap) +
              " terms (last term " + std::to_string(term) + ", sum " + std::to_string(sum) + ")");
  }
  return sum;
}

double lambda_coeff(std::size_t i, std::size_t k) {
  if (k == 0 || i == 0 || i > k) {
    raise(ErrorCode::InvalidArgument, "lambda_coeff needs 1 <= i <= k, got i = " +
                                          std::to_string(i) + ", k = " + std::to_string(k));
  }
  const double kd = static_cast<double>(k);
  const double id = static_cast<double>(i);
  double value = std::pow(kd, -1.5) * std::sqrt((kd + 1.0) / (2.0 * std::numbers::pi)) *
                 std::pow(std::pow(kd, kd / (kd + 1.0)) / (kd + 1.0), id);
  for (std::size_t j = 1; j <= k; ++j) {
    if (j == i) continue;
    const double arg = (static_cast<double>(j) - id) / (kd + 1.0);
    const double g = std::tgamma(arg);
    if (!std::isfinite(g)) {
      raise(ErrorCode::NumericalFailure, "gamma pole in Lambda numerator at i = " +
                                             std::to_string(i) + ", j = " + std::to_string(j) +
                                             ", k = " + std::to_string(k));
    }
    value *= g;
  }
  for (std::size_t j = 1; j <= k; ++j) {
    const double arg = (static_cast<double>(j) + 1.0) / kd - id / (kd + 1.0);
    // 1/Gamma vanishes at the poles.
    if (is_non_positive_integer(arg)) return 0.0;
    value /= std::tgamma(arg);
  }
  return value;
}

double ginibre_product_pdf(double x, std::size_t k) {
  if (k == 0 || k > kMaxGinibreFactors) {
    raise(ErrorCode::InvalidArgument,
          "ginibre_product_pdf supports 1 <= k <= 8, got " + std::to_string(k));
  }
  const double edge = ginibre_support_max(k);
  if (x < 0.0 || x >= edge) return 0.0;
  if (x == 0.0) return std::numeric_limits<double>::infinity();

  const double kd = static_cast<double>(k);
  const double argument = x / edge;  // x k^k / (k+1)^(k+1)
  std::vector<double> a(k);
  std::vector<double> b;
  b.reserve(k - 1);
  double density = 0.0;
  for (std::size_t i = 1; i <= k; ++i) {
    const double id = static_cast<double>(i);
    b.clear();
    for (std::size_t j = 1; j <= k; ++j) {
      const double jd = static_cast<double>(j);
      a[j - 1] = 1.0 - (1.0 + jd) / kd + id / (kd + 1.0);
      if (j != i) b.push_back(1.0 + (id - jd) / (kd + 1.0));
    }
    density += lambda_coeff(i, k) * std::pow(x, id / (kd + 1.0) - 1.0) *
               hypergeometric_pfq(a, b, argument);
  }
  return std::max(0.0, density);
}

}  // namespace rmtsense
