#pragma once

#include <functional>
#include <string>
#include <vector>

namespace rmtsense {

/// Spike offsets delta_1 > ... > delta_r > 0 of a Model-A covariance
/// I + sum_l delta_l u_l u_l^H. Empty means the null hypothesis.
class SpikeModel {
 public:
  SpikeModel() = default;
  explicit SpikeModel(std::vector<double> deltas);

  const std::vector<double>& deltas() const noexcept { return deltas_; }
  std::size_t rank() const noexcept { return deltas_.size(); }
  bool empty() const noexcept { return deltas_.empty(); }

 private:
  std::vector<double> deltas_;
};

/// Gaussian law of sum_i f(lambda_i / p) with lambda_i the eigenvalues of n S_n.
/// Convention: c = n/p >= 1, bulk support [a, b].
struct CltParams {
  double c = 0.0;
  double mu = 0.0;
  double sigma2 = 0.0;
  std::vector<double> mu_bar;
  double a = 0.0;
  double b = 0.0;

  /// Sum of the spike shifts.
  double spike_shift() const;
  /// p * mu + spike_shift().
  double mean(std::size_t p) const;
};

/// An analytic test function and its derivative, finite on a neighbourhood of [a, b].
struct AnalyticFn {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::string domain_note;
};

/// x/c - ln(x/c) - 1; x <= 0 throws Domain.
double f_lrt(double x, double c);
double f_lrt_derivative(double x, double c);
AnalyticFn lrt_function(double c);

/// Closed-form law of the LRT statistic for at most one spike.
///   mu     = 1 + (c-1) ln(1 - 1/c)
///   sigma2 = -ln(1 - 1/c) - 1/c
///   mu_bar = delta - ln(1 + delta)
CltParams lrt_clt_closed(double c, const SpikeModel& spikes);

/// (1 + c delta)(1 + delta)/delta.
double z0_of_spike(double delta, double c);

/// Law of sum_i f(lambda_i / p) from the bulk integrals (semicircle-weighted mean,
/// principal-value double integral for the variance) and one shift per spike.
/// Every integral is refined until successive estimates agree to 1e-8 abs + rel.
CltParams clt_quadrature(const AnalyticFn& fn, double c, const SpikeModel& spikes);

/// Upper standard-normal tail.
double q_function(double x);

/// x with q_function(x) = p, by bisection; p outside (0, 1) throws Domain.
double q_inverse(double p);

}  // namespace rmtsense
