#pragma once

#include <optional>
#include <span>
#include <string_view>

#include <nlohmann/json.hpp>

#include "rmtsense/lss_clt.hpp"
#include "rmtsense/rmt_core.hpp"
#include "rmtsense/spectral_laws.hpp"

namespace rmtsense {

enum class Decision { NoiseOnly, SignalPresent };

std::string_view to_string(Decision decision) noexcept;

/// Gaussian law N(mean, stddev^2) of a (possibly aggregated) linear statistic.
struct GaussianLaw {
  double mean = 0.0;
  double stddev = 0.0;
};

/// Law of the single-server statistic sum_i f(lambda_i/p): mean p*mu + sum mu_bar, stddev sigma.
GaussianLaw statistic_law(const CltParams& params, std::size_t p);

struct DetectionReport {
  double statistic = 0.0;
  double threshold = 0.0;
  Decision decision = Decision::NoiseOnly;
  double epsilon = 0.0;
  double predicted_pfa = 0.0;
  std::optional<double> predicted_pd;
  CltParams params_h0;
  std::optional<CltParams> params_h1;
};

nlohmann::json to_json(const CltParams& params);
nlohmann::json to_json(const DetectionReport& report);

struct RingStats {
  double inner_estimate = 0.0;
  std::size_t inside_count = 0;
  std::size_t total = 0;
};

/// sum_i f_lrt(lambda_i/p, c) over the p eigenvalues of n*S_n (c = n/p > 1).
/// Summed in ascending order so the result does not depend on input order.
double lrt_statistic(std::span<const double> eigs, std::size_t p, double c);

/// gamma = m + s*Qinv(epsilon).
double threshold(const GaussianLaw& law, double epsilon);
double threshold(const CltParams& params_h0, std::size_t p, double epsilon);

struct ErrorProbabilities {
  double pfa = 0.0;
  std::optional<double> pd;
};

/// pfa = Q((gamma - m0)/s0); pd = Q((gamma - m1)/s1) when an H1 law is supplied.
ErrorProbabilities error_probabilities(double gamma, const GaussianLaw& h0,
                                       const std::optional<GaussianLaw>& h1);
ErrorProbabilities error_probabilities(double gamma, const CltParams& params_h0,
                                       const std::optional<CltParams>& params_h1, std::size_t p);

/// SignalPresent iff statistic > gamma.
Decision decide(double statistic, double gamma) noexcept;

/// Full single-statistic report: threshold, decision and predicted error rates.
DetectionReport detect(double statistic, const CltParams& params_h0,
                       const std::optional<CltParams>& params_h1, std::size_t p, double epsilon);

inline constexpr double kDefaultInnerQuantile = 0.02;

/// Modulus at index floor(quantile * size) of the sorted moduli; quantile in [0, 0.5).
double inner_radius_estimate(const ComplexSpectrum& spectrum,
                             double quantile = kDefaultInnerQuantile);

/// Eigenvalues strictly inside the theoretical inner circle, plus the minimum modulus.
RingStats inside_ring_count(const ComplexSpectrum& spectrum, const RingLawParams& params);

/// noise.inside_count / signal.inside_count; zero signal count throws UndefinedRatio.
double shrink_ratio(const RingStats& noise, const RingStats& signal);

}  // namespace rmtsense
