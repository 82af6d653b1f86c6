// Acceptance checks, one PASS/FAIL line per criterion.
//   rmtsense_acceptance                 run all twelve
//   rmtsense_acceptance --criterion N   run criterion N only
// Exit status is 0 only when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "rmtsense/detector.hpp"
#include "rmtsense/empirical.hpp"
#include "rmtsense/error.hpp"
#include "rmtsense/lss_clt.hpp"
#include "rmtsense/random.hpp"
#include "rmtsense/rmt_core.hpp"
#include "rmtsense/selftest.hpp"
#include "rmtsense/sensing_sim.hpp"
#include "rmtsense/spectral_laws.hpp"

using namespace rmtsense;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string format(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string format(const char* fmt, ...) {
  char buf[1024];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

const char* verdict(bool ok) { return ok ? "ok" : "MISS"; }

/// Pooled moduli of the L = 5 product spectrum over ten N = 256, T = 512 noise ensembles.
const std::vector<double>& ring_moduli() {
  static const std::vector<double> pooled = [] {
    std::vector<double> out;
    for (std::uint64_t k = 0; k < 10; ++k) {
      const SnapshotEnsemble e =
          acquire(SourceSpec::white_noise(), AcquisitionMode::TimeEvolving, 256, 512, 5, derive_seed(1001, {k}));
      PipelineOptions options;
      options.seed = derive_seed(1002, {k});
      const std::vector<double> r = empirical::moduli(product_chain(e, options).values);
      out.insert(out.end(), r.begin(), r.end());
    }
    return out;
  }();
  return pooled;
}

Outcome ring_law_ks() {
  const RingLawParams params(0.5, 5);
  const double ks = empirical::ks_distance(ring_moduli(), [&](double r) { return ring_radial_cdf(r, params); });
  return {ks < 0.05, format("KS = %.4f over %zu moduli (limit 0.05)", ks, ring_moduli().size())};
}

Outcome inner_radius() {
  const double target = ring_inner_radius(RingLawParams(0.5, 5));
  ComplexSpectrum pooled;
  for (double r : ring_moduli()) pooled.values.emplace_back(r, 0.0);
  const double estimate = inner_radius_estimate(pooled, 0.02);
  const bool ok = estimate >= target - 0.05 && estimate <= target + 0.10;
  return {ok, format("estimate %.4f, window [%.4f, %.4f] around %.5f", estimate, target - 0.05, target + 0.10, target)};
}

Outcome lrt_closed_forms() {
  const double mu_target = 1.0 - std::numbers::ln2;
  const double sigma2_target = std::numbers::ln2 / 2.0;
  const double machine = 8.0 * std::numeric_limits<double>::epsilon();
  const CltParams closed = lrt_clt_closed(2.0, SpikeModel({1.0}));
  const CltParams quad = clt_quadrature(lrt_function(2.0), 2.0, SpikeModel({1.0}));
  const bool closed_mu = std::abs(closed.mu - mu_target) <= machine;
  const bool closed_sigma2 = std::abs(closed.sigma2 - sigma2_target) <= machine;
  const bool quad_mu = std::abs(quad.mu - mu_target) <= 1e-6;
  const bool quad_sigma2 = std::abs(quad.sigma2 - sigma2_target) <= 1e-6;
  const bool quad_mu_bar = std::abs(quad.mu_bar[0] - mu_target) <= 1e-6;
  return {closed_mu && closed_sigma2 && quad_mu && quad_sigma2 && quad_mu_bar,
          format("closed mu %.15f [%s], closed sigma2 %.15f vs %.15f [%s], quadrature mu %.12f [%s], "
                 "sigma2 %.12f [%s], mu_bar %.12f [%s]",
                 closed.mu, verdict(closed_mu), closed.sigma2, sigma2_target, verdict(closed_sigma2), quad.mu,
                 verdict(quad_mu), quad.sigma2, verdict(quad_sigma2), quad.mu_bar[0], verdict(quad_mu_bar))};
}

Outcome lrt_monte_carlo() {
  const std::size_t p = 200, n = 400, trials = 2000;
  const double sigma2_target = 0.346574;
  const CltParams h0 = lrt_clt_closed(2.0, SpikeModel{});
  std::vector<double> values;
  values.reserve(trials);
  for (std::size_t k = 0; k < trials; ++k) {
    values.push_back(server_compute(gen_ginibre(p, n, derive_seed(4001, {k}))).statistic);
  }
  const double mean = empirical::mean(values);
  const double variance = empirical::variance(values);
  const double pmu = static_cast<double>(p) * h0.mu;
  const bool mean_ok = std::abs(mean - pmu) <= 0.15;
  const bool variance_ok = std::abs(variance / sigma2_target - 1.0) <= 0.15;
  return {mean_ok && variance_ok,
          format("mean %.4f vs p*mu %.4f +- 0.15 [%s], variance %.4f vs %.6f +- 15%% [%s] "
                 "(closed-form law variance %.6f)",
                 mean, pmu, verdict(mean_ok), variance, sigma2_target, verdict(variance_ok), h0.sigma2)};
}

ScenarioConfig distributed_scenario(SpikeModel spikes, std::uint64_t seed) {
  ScenarioConfig config;
  config.servers = 8;
  config.p = 200;
  config.n = 400;
  config.epsilon = 0.05;
  config.seed = seed;
  config.trials = 2000;
  config.source = spikes.empty() ? SourceSpec::white_noise() : SourceSpec::spiked(std::move(spikes));
  return config;
}

struct RunSummary {
  double rate = 0.0;
  double predicted_pd = 0.0;
};

RunSummary run_trials(const ScenarioConfig& config) {
  std::size_t detections = 0;
  RunSummary summary;
  for (std::size_t t = 0; t < config.trials; ++t) {
    const DistributedRun run = run_distributed(config, t);
    if (run.result.report.decision == Decision::SignalPresent) ++detections;
    summary.predicted_pd = run.result.report.predicted_pd.value_or(std::nan(""));
  }
  summary.rate = static_cast<double>(detections) / static_cast<double>(config.trials);
  return summary;
}

Outcome distributed_false_alarm() {
  const RunSummary s = run_trials(distributed_scenario(SpikeModel{}, 5001));
  return {s.rate >= 0.03 && s.rate <= 0.07, format("false-alarm rate %.4f over 2000 runs (window [0.03, 0.07])", s.rate)};
}

Outcome distributed_detection() {
  const RunSummary s = run_trials(distributed_scenario(SpikeModel({1.0}), 6001));
  const bool ok = std::abs(s.rate - s.predicted_pd) <= 0.05;
  return {ok, format("detection rate %.4f vs predicted_pd %.4f (|diff| %.4f, limit 0.05)", s.rate, s.predicted_pd,
                     std::abs(s.rate - s.predicted_pd))};
}

Outcome ginibre_product_law() {
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double edge = ginibre_support_max(2);
  std::vector<double> pooled;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const std::vector<double> v = ginibre_product_squared_singular_values(2, 256, derive_seed(7001, {k}));
    pooled.insert(pooled.end(), v.begin(), v.end());
  }
  const std::size_t bins = 50;
  std::vector<double> edges(bins + 1), expected(bins);
  for (std::size_t b = 0; b <= bins; ++b) edges[b] = edge * static_cast<double>(b) / static_cast<double>(bins);
  edges.back() = edge;
  for (std::size_t b = 0; b < bins; ++b) {
    expected[b] = integrator.integrate([](double x) { return ginibre_product_pdf_k2(x); }, edges[b], edges[b + 1]);
  }
  const double l1 = empirical::binned_l1_distance(pooled, edges, expected);
  const bool l1_ok = l1 < 0.10;

  double k2_err = 0.0;
  for (int i = 1; i < 1000; ++i) {
    const double x = edge * i / 1000.0;
    const double closed = ginibre_product_pdf_k2(x);
    k2_err = std::max(k2_err, std::abs(ginibre_product_pdf(x, 2) - closed) / closed);
  }
  double k1_err = 0.0;
  for (int i = 1; i < 1000; ++i) {
    const double x = 4.0 * i / 1000.0;
    k1_err = std::max(k1_err, std::abs(ginibre_product_pdf(x, 1) - mp_pdf(x, 1.0)) / mp_pdf(x, 1.0));
  }
  double mass_err = 0.0;
  for (std::size_t k = 1; k <= 6; ++k) {
    const double mass =
        integrator.integrate([k](double x) { return ginibre_product_pdf(x, k); }, 0.0, ginibre_support_max(k));
    mass_err = std::max(mass_err, std::abs(mass - 1.0));
  }
  const bool k2_ok = k2_err <= 1e-6;
  const bool k1_ok = k1_err <= 1e-6;
  const bool mass_ok = mass_err <= 1e-5;
  return {l1_ok && k2_ok && k1_ok && mass_ok,
          format("binned L1 %.4f (limit 0.10) [%s], k=2 rel err %.2e [%s], k=1 vs MP rel err %.2e [%s], "
                 "max |mass - 1| for k<=6 %.2e [%s]",
                 l1, verdict(l1_ok), k2_err, verdict(k2_ok), k1_err, verdict(k1_ok), mass_err, verdict(mass_ok))};
}

Outcome geometric_mean_ring() {
  const SnapshotEnsemble e =
      acquire(SourceSpec::white_noise(), AcquisitionMode::TimeEvolving, 256, 512, 20, 8001);
  PipelineOptions options;
  options.seed = 8002;
  const std::vector<double> r = empirical::moduli(geometric_mean_spectrum(e, options).values);
  const double lo = std::sqrt(0.5) - 0.05;
  const auto inside = std::count_if(r.begin(), r.end(), [&](double v) { return v >= lo && v <= 1.05; });
  const double fraction = static_cast<double>(inside) / static_cast<double>(r.size());
  return {fraction >= 0.95, format("%.4f of moduli in [%.4f, 1.05] (need >= 0.95)", fraction, lo)};
}

Outcome arithmetic_mean_stability() {
  const RingLawParams single(0.5, 1);
  std::vector<double> percentiles;
  std::string detail;
  bool ks_ok = true;
  for (std::size_t l : {5u, 20u, 100u}) {
    std::vector<double> pooled;
    for (std::uint64_t k = 0; k < 10; ++k) {
      const SnapshotEnsemble e =
          acquire(SourceSpec::white_noise(), AcquisitionMode::TimeEvolving, 256, 512, l, derive_seed(9001, {l, k}));
      PipelineOptions options;
      options.normalize = true;
      options.seed = derive_seed(9002, {l, k});
      const std::vector<double> r = empirical::moduli(arithmetic_mean_spectrum(e, options).values);
      pooled.insert(pooled.end(), r.begin(), r.end());
    }
    const double p5 = empirical::quantile(pooled, 0.05);
    const double ks = empirical::ks_distance(pooled, [&](double v) { return ring_radial_cdf(v, single); });
    percentiles.push_back(p5);
    ks_ok = ks_ok && ks < 0.05;
    detail += format("L=%zu: p5 %.4f, KS %.4f; ", l, p5, ks);
  }
  const double spread = *std::max_element(percentiles.begin(), percentiles.end()) -
                        *std::min_element(percentiles.begin(), percentiles.end());
  const bool spread_ok = spread <= 0.05;
  detail += format("p5 spread %.4f (limit 0.05) [%s], KS limit 0.05 [%s]", spread, verdict(spread_ok), verdict(ks_ok));
  return {spread_ok && ks_ok, detail};
}

Outcome ring_shrink_trend() {
  const std::vector<double> ls = {2, 4, 6, 8, 10};
  std::vector<double> rho;
  std::string detail;
  for (double ld : ls) {
    const auto l = static_cast<std::size_t>(ld);
    const RingLawParams params(0.5, l);
    std::vector<double> noise_counts, signal_counts;
    for (std::uint64_t k = 0; k < 20; ++k) {
      PipelineOptions options;
      options.seed = derive_seed(10002, {l, k});
      const SnapshotEnsemble noise =
          acquire(SourceSpec::white_noise(), AcquisitionMode::TimeEvolving, 256, 512, l, derive_seed(10001, {l, k, 0}));
      const SnapshotEnsemble signal =
          acquire(SourceSpec::ar(0.9, 0.0), AcquisitionMode::TimeEvolving, 256, 512, l, derive_seed(10001, {l, k, 1}));
      noise_counts.push_back(static_cast<double>(inside_ring_count(product_chain(noise, options), params).inside_count));
      signal_counts.push_back(static_cast<double>(inside_ring_count(product_chain(signal, options), params).inside_count));
    }
    RingStats noise{0.0, static_cast<std::size_t>(empirical::median(noise_counts)), 256};
    RingStats signal{0.0, static_cast<std::size_t>(empirical::median(signal_counts)), 256};
    const double ratio = shrink_ratio(noise, signal);
    rho.push_back(ratio);
    detail += format("L=%zu: rho %.3f (%zu/%zu); ", l, ratio, noise.inside_count, signal.inside_count);
  }
  const double s = empirical::spearman(ls, rho);
  detail += format("Spearman %.3f (need < 0)", s);
  return {s < 0.0, detail};
}

Outcome ar_generator() {
  const double r = 0.5;
  const std::uint64_t seed = 11001;
  const std::vector<double> y = gen_ar_signal(r, 100000, seed);
  const std::vector<double> x = real_gaussian_series(100000, seed);
  const double acf = empirical::autocorrelation(y, 1);
  const double ratio = empirical::variance(y) / empirical::variance(x);
  const double target = (1.0 + r) * (1.0 + r) / (1.0 - r * r);
  const bool acf_ok = acf >= 0.48 && acf <= 0.52;
  const bool ratio_ok = std::abs(ratio / target - 1.0) <= 0.05;
  return {acf_ok && ratio_ok, format("lag-1 autocorrelation %.4f in [0.48, 0.52] [%s], variance ratio %.4f vs %.1f +- 5%% [%s]",
                                     acf, verdict(acf_ok), ratio, target, verdict(ratio_ok))};
}

Outcome determinism_and_selftest() {
  ScenarioConfig config = distributed_scenario(SpikeModel({1.0}), 12001);
  config.threads = 8;
  bool identical = true;
  for (std::uint64_t t = 0; t < 3; ++t) {
    const DistributedRun seq = run_distributed(config, t, Execution::Sequential);
    const DistributedRun par = run_distributed(config, t, Execution::Parallel);
    for (std::size_t i = 0; i < seq.trace.size(); ++i) {
      identical = identical && std::memcmp(&seq.trace[i].statistic, &par.trace[i].statistic, sizeof(double)) == 0;
    }
    identical = identical && to_json(seq.result).dump() == to_json(par.result).dump();
  }
  const SelftestReport report = run_selftest();
  std::size_t failed = 0;
  for (const SelftestCheck& c : report.checks) failed += c.passed ? 0 : 1;
  return {identical && report.passed(), format("parallel vs sequential bit-identical over 3 trials [%s], selftest %zu/%zu checks pass",
                                               verdict(identical), report.checks.size() - failed, report.checks.size())};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"ring law KS", ring_law_ks},
      {"inner radius estimate", inner_radius},
      {"LRT CLT closed forms", lrt_closed_forms},
      {"LRT CLT Monte Carlo", lrt_monte_carlo},
      {"distributed false-alarm calibration", distributed_false_alarm},
      {"distributed detection prediction", distributed_detection},
      {"Ginibre product law", ginibre_product_law},
      {"geometric-mean ring", geometric_mean_ring},
      {"arithmetic-mean stability", arithmetic_mean_stability},
      {"ring shrink trend", ring_shrink_trend},
      {"AR generator", ar_generator},
      {"determinism and selftest", determinism_and_selftest},
  };

  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      const long index = std::strtol(argv[++i], nullptr, 10);
      if (index < 1 || index > static_cast<long>(criteria.size())) {
        std::fprintf(stderr, "criterion must be 1..%zu\n", criteria.size());
        return 64;
      }
      selected.push_back(static_cast<std::size_t>(index));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
      return 64;
    }
  }
  if (selected.empty()) {
    for (std::size_t i = 1; i <= criteria.size(); ++i) selected.push_back(i);
  }

  bool all = true;
  for (std::size_t index : selected) {
    const Criterion& c = criteria[index - 1];
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("CRITERION %02zu %s %s: %s [%.1f s]\n", index, outcome.passed ? "PASS" : "FAIL", c.name,
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
    all = all && outcome.passed;
  }
  return all ? 0 : 1;
}
