#include "rmtsense/detector.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rmtsense/error.hpp"

namespace rmtsense {
namespace {

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    raise(ErrorCode::Domain, "false-alarm target must be in (0, 1), got " + std::to_string(epsilon));
  }
}

void require_spread(const GaussianLaw& law, const char* which) {
  if (!(law.stddev > 0.0) || !std::isfinite(law.stddev)) {
    raise(ErrorCode::Domain, std::string(which) + " law has non-positive variance (stddev " +
                                 std::to_string(law.stddev) + ")");
  }
}

}  // namespace

std::string_view to_string(Decision decision) noexcept {
  return decision == Decision::SignalPresent ? "SignalPresent" : "NoiseOnly";
}

GaussianLaw statistic_law(const CltParams& params, std::size_t p) {
  return {params.mean(p), std::sqrt(std::max(params.sigma2, 0.0))};
}

nlohmann::json to_json(const CltParams& params) {
  return {{"c", params.c},   {"mu", params.mu}, {"sigma2", params.sigma2},
          {"mu_bar", params.mu_bar}, {"a", params.a}, {"b", params.b}};
}

nlohmann::json to_json(const DetectionReport& report) {
  nlohmann::json out = {
      {"statistic", report.statistic},
      {"threshold", report.threshold},
      {"decision", std::string(to_string(report.decision))},
      {"epsilon", report.epsilon},
      {"predicted_pfa", report.predicted_pfa},
      {"predicted_pd", nullptr},
      {"params_h0", to_json(report.params_h0)},
      {"params_h1", nullptr},
      {"threshold_rule", "mean + stddev * Qinv(epsilon)"},
  };
  if (report.predicted_pd) out["predicted_pd"] = *report.predicted_pd;
  if (report.params_h1) out["params_h1"] = to_json(*report.params_h1);
  return out;
}

double lrt_statistic(std::span<const double> eigs, std::size_t p, double c) {
  if (eigs.size() != p) {
    raise(ErrorCode::InvalidArgument, "expected " + std::to_string(p) + " eigenvalues, got " +
                                          std::to_string(eigs.size()));
  }
  if (!(c > 1.0)) raise(ErrorCode::Domain, "LRT needs c = n/p > 1, got " + std::to_string(c));
  std::vector<double> sorted(eigs.begin(), eigs.end());
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty() && !(sorted.front() > 0.0)) {
    raise(ErrorCode::Domain, "non-positive eigenvalue " + std::to_string(sorted.front()) +
                                 ": sample covariance is rank deficient");
  }
  const double pd = static_cast<double>(p);
  double sum = 0.0;
  for (double lambda : sorted) sum += f_lrt(lambda / pd, c);
  return sum;
}

double threshold(const GaussianLaw& law, double epsilon) {
  require_epsilon(epsilon);
  return law.mean + law.stddev * q_inverse(epsilon);
}

double threshold(const CltParams& params_h0, std::size_t p, double epsilon) {
  return threshold(statistic_law(params_h0, p), epsilon);
}

ErrorProbabilities error_probabilities(double gamma, const GaussianLaw& h0,
                                       const std::optional<GaussianLaw>& h1) {
  require_spread(h0, "H0");
  ErrorProbabilities out;
  out.pfa = q_function((gamma - h0.mean) / h0.stddev);
  if (h1) {
    require_spread(*h1, "H1");
    out.pd = q_function((gamma - h1->mean) / h1->stddev);
  }
  return out;
}

ErrorProbabilities error_probabilities(double gamma, const CltParams& params_h0,
                                       const std::optional<CltParams>& params_h1, std::size_t p) {
  std::optional<GaussianLaw> h1;
  if (params_h1) {
    if (params_h1->c != params_h0.c) {
      raise(ErrorCode::InvalidArgument, "H0 and H1 parameters use different c");
    }
    h1 = statistic_law(*params_h1, p);
  }
  return error_probabilities(gamma, statistic_law(params_h0, p), h1);
}

Decision decide(double statistic, double gamma) noexcept {
  return statistic > gamma ? Decision::SignalPresent : Decision::NoiseOnly;
}

DetectionReport detect(double statistic, const CltParams& params_h0,
                       const std::optional<CltParams>& params_h1, std::size_t p, double epsilon) {
  DetectionReport report;
  report.statistic = statistic;
  report.epsilon = epsilon;
  report.threshold = threshold(params_h0, p, epsilon);
  report.decision = decide(statistic, report.threshold);
  const ErrorProbabilities probs = error_probabilities(report.threshold, params_h0, params_h1, p);
  report.predicted_pfa = probs.pfa;
  report.predicted_pd = probs.pd;
  report.params_h0 = params_h0;
  report.params_h1 = params_h1;
  return report;
}

double inner_radius_estimate(const ComplexSpectrum& spectrum, double quantile) {
  if (spectrum.values.empty()) raise(ErrorCode::InvalidArgument, "empty spectrum");
  if (!(quantile >= 0.0 && quantile < 0.5)) {
    raise(ErrorCode::InvalidArgument,
          "inner-radius quantile must be in [0, 0.5), got " + std::to_string(quantile));
  }
  std::vector<double> moduli;
  moduli.reserve(spectrum.values.size());
  for (const Complex& v : spectrum.values) moduli.push_back(std::abs(v));
  const auto index = static_cast<std::size_t>(std::floor(quantile * static_cast<double>(moduli.size())));
  std::nth_element(moduli.begin(), moduli.begin() + static_cast<std::ptrdiff_t>(index), moduli.end());
  return moduli[index];
}

RingStats inside_ring_count(const ComplexSpectrum& spectrum, const RingLawParams& params) {
  const double radius = ring_inner_radius(params);
  RingStats stats;
  stats.total = spectrum.values.size();
  for (const Complex& v : spectrum.values) {
    if (std::abs(v) < radius) ++stats.inside_count;
  }
  if (!spectrum.values.empty()) stats.inner_estimate = inner_radius_estimate(spectrum, 0.0);
  return stats;
}

double shrink_ratio(const RingStats& noise, const RingStats& signal) {
  if (signal.inside_count == 0) {
    raise(ErrorCode::UndefinedRatio, "signal spectrum has no eigenvalues inside the inner circle");
  }
  return static_cast<double>(noise.inside_count) / static_cast<double>(signal.inside_count);
}

}  // namespace rmtsense
