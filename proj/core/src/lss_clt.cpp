#include "rmtsense/lss_clt.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "rmtsense/error.hpp"
#include "rmtsense/quadrature.hpp"

namespace rmtsense {
namespace {

constexpr double kQuadAbsTol = 1e-10;
constexpr double kQuadRelTol = 1e-10;
constexpr std::size_t kMaxPoints = 4096;
constexpr double kCriticalTol = 1e-12;

/// Bulk geometry for c = n/p: x = mid + half*cos(theta) maps [0, pi] onto [a, b]
/// and absorbs both square-root endpoint singularities.
struct Bulk {
  double a;
  double b;
  double mid;
  double half;

  explicit Bulk(double c) {
    const double root = std::sqrt(c);
    a = (1.0 - root) * (1.0 - root);
    b = (1.0 + root) * (1.0 + root);
    mid = 0.5 * (a + b);
    half = 0.5 * (b - a);
  }

  double at(double theta) const { return mid + half * std::cos(theta); }
};

struct Probe {
  double x, f, df;
};

Probe probe(const AnalyticFn& fn, double x) {
  Probe p{x, 0.0, 0.0};
  try {
    p.f = fn.f(x);
    p.df = fn.df(x);
  } catch (const Error& e) {
    raise(ErrorCode::Domain, "test function is singular inside [a, b] at x = " + std::to_string(x) +
                                 " (" + e.what() + ")");
  }
  if (!std::isfinite(p.f) || !std::isfinite(p.df)) {
    raise(ErrorCode::Domain, "test function is not finite inside [a, b] at x = " + std::to_string(x));
  }
  return p;
}

// A secant rising against the derivative at both ends means a jump between the probes.
bool jumps(const Probe& lo, const Probe& hi) {
  const double secant = hi.f - lo.f;
  return (secant > 0.0 && lo.df < 0.0 && hi.df < 0.0) || (secant < 0.0 && lo.df > 0.0 && hi.df > 0.0);
}

void require_analytic_on_bulk(const AnalyticFn& fn, const Bulk& bulk) {
  constexpr int kProbes = 64;
  std::vector<Probe> probes;
  for (int i = kProbes; i >= 0; --i) probes.push_back(probe(fn, bulk.at(std::numbers::pi * i / kProbes)));
  for (std::size_t i = 0; i + 1 < probes.size(); ++i) {
    Probe lo = probes[i];
    Probe hi = probes[i + 1];
    if (!jumps(lo, hi)) continue;
    for (int iter = 0; iter < 200 && hi.x - lo.x > 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi.x);
         ++iter) {
      const Probe mid = probe(fn, 0.5 * (lo.x + hi.x));
      if (jumps(lo, mid)) {
        hi = mid;
      } else if (jumps(mid, hi)) {
        lo = mid;
      } else {
        break;
      }
    }
    if (jumps(lo, hi) && std::abs(hi.f - lo.f) > 1e-6 * (1.0 + std::abs(lo.f) + std::abs(hi.f)) &&
        hi.x - lo.x < 1e-9 * (1.0 + std::abs(hi.x))) {
      raise(ErrorCode::Domain, "test function is singular inside [a, b] near x = " + std::to_string(lo.x));
    }
  }
}

double bulk_mean(const AnalyticFn& fn, const Bulk& bulk) {
  // (1/2pi) int_a^b f(x) sqrt((b-x)(x-a))/x dx
  auto integrand = [&](double theta) {
    const double s = std::sin(theta);
    const double x = bulk.at(theta);
    return fn.f(x) * bulk.half * bulk.half * s * s / x;
  };
  const auto result = quad::integrate_converged(integrand, 0.0, std::numbers::pi, kQuadAbsTol,
                                                kQuadRelTol, 16, kMaxPoints);
  return result.value / (2.0 * std::numbers::pi);
}

/// Variance at one refinement level. The inner principal value integral
///   P int_a^b f'(y) w(y) / (x - y) dy,  w(y) = sqrt((b-y)(y-a)),
/// is split into a regular difference quotient plus the closed form
///   P int_a^b w(y)/(x - y) dy = pi (x - mid).
/// Inner nodes come from an (n+1)-point rule so they never coincide with the
/// n outer nodes.
double variance_at(const AnalyticFn& fn, const Bulk& bulk, std::size_t n) {
  const quad::GaussLegendre outer = quad::gauss_legendre(n);
  const quad::GaussLegendre inner = quad::gauss_legendre(n + 1);
  const double half_pi = 0.5 * std::numbers::pi;

  std::vector<double> y(inner.nodes.size());
  std::vector<double> dfy(inner.nodes.size());
  std::vector<double> wy(inner.nodes.size());
  for (std::size_t j = 0; j < inner.nodes.size(); ++j) {
    const double phi = half_pi * (inner.nodes[j] + 1.0);
    const double s = std::sin(phi);
    y[j] = bulk.at(phi);
    dfy[j] = fn.df(y[j]);
    wy[j] = inner.weights[j] * half_pi * bulk.half * bulk.half * s * s;
  }

  double total = 0.0;
  for (std::size_t i = 0; i < outer.nodes.size(); ++i) {
    const double theta = half_pi * (outer.nodes[i] + 1.0);
    const double x = bulk.at(theta);
    const double dfx = fn.df(x);
    double pv = std::numbers::pi * dfx * (x - bulk.mid);
    for (std::size_t j = 0; j < y.size(); ++j) {
      pv += wy[j] * (dfy[j] - dfx) / (x - y[j]);
    }
    total += outer.weights[i] * half_pi * fn.f(x) * pv;
  }
  return total / (2.0 * std::numbers::pi * std::numbers::pi);
}

double bulk_variance(const AnalyticFn& fn, const Bulk& bulk) {
  std::size_t n = 16;
  double previous = variance_at(fn, bulk, n);
  double achieved = 0.0;
  while (n < kMaxPoints / 4) {
    n *= 2;
    const double current = variance_at(fn, bulk, n);
    achieved = std::abs(current - previous);
    if (achieved <= kQuadAbsTol + kQuadRelTol * std::abs(current)) return current;
    previous = current;
  }
  raise(ErrorCode::NumericalFailure,
        "variance integral did not converge; achieved " + std::to_string(achieved));
}

/// Mean shift of one spike. The bulk integral uses the square-root branch that
/// is analytic in delta, sqrt((z0-a)(z0-b)) -> (c delta^2 - 1)/delta. A
/// supercritical spike (delta > 1/sqrt(c)) separates an outlier at z0 and adds
/// its residue f(z0); at the critical point the pole sits on the bulk edge and
/// contributes half of it.
double spike_shift(const AnalyticFn& fn, const Bulk& bulk, double c, double delta) {
  const double z0 = z0_of_spike(delta, c);
  const double branch = (c * delta * delta - 1.0) / delta;
  auto integrand = [&](double theta) {
    const double x = bulk.at(theta);
    return fn.f(x) * (-branch / (z0 - x) - 1.0);
  };
  const auto result = quad::integrate_converged(integrand, 0.0, std::numbers::pi, kQuadAbsTol,
                                                kQuadRelTol, 16, kMaxPoints);
  double shift = result.value / (2.0 * std::numbers::pi);

  const double criticality = c * delta * delta - 1.0;
  if (criticality > -kCriticalTol) {
    const double residue = fn.f(z0);
    if (!std::isfinite(residue)) {
      raise(ErrorCode::Domain, "test function is not finite at the outlier z0 = " +
                                   std::to_string(z0));
    }
    shift += (std::abs(criticality) <= kCriticalTol ? 0.5 : 1.0) * residue;
  }
  return shift;
}

}  // namespace

SpikeModel::SpikeModel(std::vector<double> deltas) : deltas_(std::move(deltas)) {
  for (std::size_t l = 0; l < deltas_.size(); ++l) {
    if (!(deltas_[l] > 0.0) || !std::isfinite(deltas_[l])) {
      raise(ErrorCode::InvalidArgument,
            "spike offset " + std::to_string(l) + " must be finite and > 0");
    }
    if (l > 0 && !(deltas_[l] < deltas_[l - 1])) {
      raise(ErrorCode::InvalidArgument, "spike offsets must be strictly descending");
    }
  }
}

double CltParams::spike_shift() const { return std::accumulate(mu_bar.begin(), mu_bar.end(), 0.0); }

double CltParams::mean(std::size_t p) const { return static_cast<double>(p) * mu + spike_shift(); }

double f_lrt(double x, double c) {
  if (!(x > 0.0)) raise(ErrorCode::Domain, "f_lrt needs x > 0, got " + std::to_string(x));
  if (!(c > 0.0)) raise(ErrorCode::Domain, "f_lrt needs c > 0, got " + std::to_string(c));
  const double t = x / c;
  return t - std::log(t) - 1.0;
}

double f_lrt_derivative(double x, double c) {
  if (!(x > 0.0)) raise(ErrorCode::Domain, "f_lrt needs x > 0, got " + std::to_string(x));
  return 1.0 / c - 1.0 / x;
}

AnalyticFn lrt_function(double c) {
  return {[c](double x) { return f_lrt(x, c); }, [c](double x) { return f_lrt_derivative(x, c); },
          "x/c - ln(x/c) - 1, analytic on (0, inf)"};
}

CltParams lrt_clt_closed(double c, const SpikeModel& spikes) {
  if (!(c > 1.0)) {
    raise(ErrorCode::Domain, "LRT closed forms need c = n/p > 1, got " + std::to_string(c));
  }
  if (spikes.rank() > 1) {
    raise(ErrorCode::UnsupportedClosedForm,
          "closed form covers at most one spike; use clt_quadrature for r = " +
              std::to_string(spikes.rank()));
  }
  const Bulk bulk(c);
  const double log_term = std::log1p(-1.0 / c);
  CltParams params;
  params.c = c;
  params.a = bulk.a;
  params.b = bulk.b;
  params.mu = 1.0 + (c - 1.0) * log_term;
  params.sigma2 = -log_term - 1.0 / c;
  for (double delta : spikes.deltas()) params.mu_bar.push_back(delta - std::log1p(delta));
  return params;
}

double z0_of_spike(double delta, double c) {
  if (!(delta > 0.0)) raise(ErrorCode::Domain, "spike offset must be > 0, got " + std::to_string(delta));
  if (!(c >= 1.0)) raise(ErrorCode::Domain, "z0 uses c = n/p >= 1, got " + std::to_string(c));
  return (1.0 + c * delta) * (1.0 + delta) / delta;
}

CltParams clt_quadrature(const AnalyticFn& fn, double c, const SpikeModel& spikes) {
  if (!(c >= 1.0)) raise(ErrorCode::Domain, "CLT uses c = n/p >= 1, got " + std::to_string(c));
  if (!fn.f || !fn.df) raise(ErrorCode::InvalidArgument, "test function and derivative required");
  const Bulk bulk(c);
  require_analytic_on_bulk(fn, bulk);

  CltParams params;
  params.c = c;
  params.a = bulk.a;
  params.b = bulk.b;
  params.mu = bulk_mean(fn, bulk);
  params.sigma2 = bulk_variance(fn, bulk);
  for (double delta : spikes.deltas()) params.mu_bar.push_back(spike_shift(fn, bulk, c, delta));
  return params;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double q_inverse(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    raise(ErrorCode::Domain, "q_inverse needs p in (0, 1), got " + std::to_string(p));
  }
  double lo = -40.0;  // q_function(lo) ~ 1
  double hi = 40.0;   // q_function(hi) ~ 0
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (q_function(mid) > p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace rmtsense
