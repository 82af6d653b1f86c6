#include "rmtsense/sensing_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "dense.hpp"
#include "rmtsense/error.hpp"
#include "rmtsense/random.hpp"

namespace rmtsense {
namespace {

/// Unit-power complex AR stream: independent real and imaginary recursions,
/// each rescaled from stationary variance (1+r)^2/(1-r^2) to 1/2.
std::vector<Complex> complex_ar_stream(double r, std::size_t length, std::uint64_t seed) {
  const std::vector<double> re = gen_ar_signal(r, length, derive_seed(seed, {0}));
  const std::vector<double> im = gen_ar_signal(r, length, derive_seed(seed, {1}));
  const double scale = std::sqrt((1.0 - r) / (1.0 + r)) * std::sqrt(0.5);
  std::vector<Complex> out(length);
  for (std::size_t i = 0; i < length; ++i) out[i] = Complex(re[i], im[i]) * scale;
  return out;
}

CMatrix white_block(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  return gen_ginibre(rows, cols, seed).data();
}

/// Multiplies white columns by Sigma^(1/2) = I + sum_l (sqrt(1 + delta_l) - 1) u_l u_l^H
/// as rank-one updates. The u_l are a Haar-random orthonormal frame: the
/// phase-corrected thin QR of a p x r Gaussian matrix.
void apply_spike_root(CMatrix& x, const SpikeModel& spikes, std::uint64_t seed) {
  const auto p = static_cast<std::size_t>(x.rows());
  if (spikes.empty()) return;
  if (spikes.rank() >= p) {
    raise(ErrorCode::InvalidArgument, "spike count " + std::to_string(spikes.rank()) +
                                          " must be smaller than p = " + std::to_string(p));
  }
  dense::QrFactors frame = dense::qr(gen_ginibre(p, spikes.rank(), seed).data());
  for (Eigen::Index j = 0; j < frame.q.cols(); ++j) {
    const Complex d = frame.r_diagonal[static_cast<std::size_t>(j)];
    if (std::abs(d) > 0.0) frame.q.col(j) *= d / std::abs(d);
  }
  const CMatrix& u = frame.q;
  const CMatrix projected = u.adjoint() * x;
  for (std::size_t l = 0; l < spikes.rank(); ++l) {
    const auto col = static_cast<Eigen::Index>(l);
    x += (std::sqrt(1.0 + spikes.deltas()[l]) - 1.0) * u.col(col) * projected.row(col);
  }
}

void require_dims(std::size_t antennas, std::size_t samples, std::size_t snapshots) {
  if (antennas == 0 || samples == 0 || snapshots == 0) {
    raise(ErrorCode::InvalidArgument, "acquisition needs N, T, L >= 1, got N = " +
                                          std::to_string(antennas) + ", T = " +
                                          std::to_string(samples) + ", L = " +
                                          std::to_string(snapshots));
  }
  if (samples < antennas) {
    raise(ErrorCode::InvalidArgument, "acquisition needs T >= N, got N = " +
                                          std::to_string(antennas) + ", T = " +
                                          std::to_string(samples));
  }
}

/// Signal part of L snapshots before noise mixing.
std::vector<CMatrix> signal_blocks(const SourceSpec& source, AcquisitionMode mode, std::size_t n,
                                   std::size_t t, std::size_t l, std::uint64_t seed) {
  std::vector<CMatrix> blocks;
  blocks.reserve(l);
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(t);
  switch (source.kind) {
    case SourceKind::WhiteNoise:
      for (std::size_t j = 0; j < l; ++j) blocks.push_back(white_block(n, t, derive_seed(seed, {j})));
      break;
    case SourceKind::Spiked: {
      const bool shared = mode == AcquisitionMode::TimeEvolving;
      for (std::size_t j = 0; j < l; ++j) {
        CMatrix block = white_block(n, t, derive_seed(seed, {j, 2}));
        apply_spike_root(block, source.spikes, derive_seed(seed, {shared ? 0 : j, 1}));
        blocks.push_back(std::move(block));
      }
      break;
    }
    case SourceKind::Ar: {
      const bool shared = mode == AcquisitionMode::TimeEvolving;
      std::vector<Complex> stream;
      if (shared) stream = complex_ar_stream(source.r, l * t + n, derive_seed(seed, {0}));
      for (std::size_t j = 0; j < l; ++j) {
        std::size_t base = j * t;
        if (!shared) {
          stream = complex_ar_stream(source.r, t + n, derive_seed(seed, {j}));
          base = 0;
        }
        CMatrix block(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i) {
          for (Eigen::Index k = 0; k < cols; ++k) {
            block(i, k) = stream[base + static_cast<std::size_t>(i + k)];
          }
        }
        blocks.push_back(std::move(block));
      }
      break;
    }
  }
  return blocks;
}

std::string server_tag(std::size_t id) { return "server " + std::to_string(id) + ": "; }

}  // namespace

std::string_view to_string(SourceKind kind) noexcept {
  switch (kind) {
    case SourceKind::WhiteNoise: return "white";
    case SourceKind::Spiked: return "spiked";
    case SourceKind::Ar: return "ar";
  }
  return "white";
}

SourceSpec SourceSpec::white_noise(std::uint64_t seed) {
  SourceSpec spec;
  spec.seed = seed;
  return spec;
}

SourceSpec SourceSpec::ar(double r, std::optional<double> snr_db, std::uint64_t seed) {
  if (!(std::abs(r) < 1.0)) {
    raise(ErrorCode::UnstableFilter, "AR coefficient must satisfy |r| < 1, got " + std::to_string(r));
  }
  SourceSpec spec;
  spec.kind = SourceKind::Ar;
  spec.r = r;
  spec.snr_db = snr_db;
  spec.seed = seed;
  return spec;
}

SourceSpec SourceSpec::spiked(SpikeModel spikes, std::uint64_t seed) {
  SourceSpec spec;
  spec.kind = SourceKind::Spiked;
  spec.spikes = std::move(spikes);
  spec.seed = seed;
  return spec;
}

std::vector<double> gen_ar_signal(double r, std::size_t length, std::uint64_t seed) {
  if (!(std::abs(r) < 1.0)) {
    raise(ErrorCode::UnstableFilter, "AR coefficient must satisfy |r| < 1, got " + std::to_string(r));
  }
  if (length == 0) raise(ErrorCode::InvalidArgument, "AR series length must be >= 1");
  const auto burn = static_cast<std::size_t>(10.0 * std::ceil(1.0 / (1.0 - std::abs(r))));
  const std::vector<double> x = real_gaussian_series(length + burn, seed);
  std::vector<double> y(length);
  double previous = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double current = (1.0 + r) * x[i] + (i == 0 ? 0.0 : r * previous);
    if (i >= burn) y[i - burn] = current;
    previous = current;
  }
  return y;
}

SnapshotMatrix gen_spiked_samples(std::size_t p, std::size_t n, const SpikeModel& spikes,
                                  std::uint64_t seed) {
  if (p == 0 || n == 0) raise(ErrorCode::InvalidArgument, "spiked samples need p, n >= 1");
  CMatrix x = white_block(p, n, derive_seed(seed, {2}));
  apply_spike_root(x, spikes, derive_seed(seed, {1}));
  return SnapshotMatrix(std::move(x));
}

SnapshotEnsemble acquire(const SourceSpec& source, AcquisitionMode mode, std::size_t antennas,
                         std::size_t samples, std::size_t snapshots, std::uint64_t seed) {
  require_dims(antennas, samples, snapshots);
  if (source.kind == SourceKind::Ar && !(std::abs(source.r) < 1.0)) {
    raise(ErrorCode::UnstableFilter, "AR coefficient must satisfy |r| < 1");
  }
  const std::uint64_t root = derive_seed(seed, {source.seed});
  std::vector<CMatrix> blocks;
  double amplitude = 1.0;
  if (source.snr_db) amplitude = std::isinf(*source.snr_db) && *source.snr_db < 0.0
                                     ? 0.0
                                     : std::pow(10.0, *source.snr_db / 20.0);
  if (amplitude > 0.0) {
    blocks = signal_blocks(source, mode, antennas, samples, snapshots, derive_seed(root, {0}));
  }

  std::vector<SnapshotMatrix> out;
  out.reserve(snapshots);
  for (std::size_t j = 0; j < snapshots; ++j) {
    CMatrix data;
    if (source.snr_db) {
      data = white_block(antennas, samples, derive_seed(root, {1, j}));
      if (amplitude > 0.0) data += amplitude * blocks[j];
    } else {
      data = std::move(blocks[j]);
    }
    out.emplace_back(std::move(data), j);
  }
  return SnapshotEnsemble(std::move(out), mode);
}

nlohmann::json to_json(const CoordinatorResult& result) {
  nlohmann::json out = to_json(result.report);
  out["l_d"] = result.l_d;
  out["mu_d"] = result.mu_d;
  out["sigma_d"] = result.sigma_d;
  return out;
}

ServerResult server_compute(const SnapshotMatrix& x, std::size_t server_id) {
  const std::size_t p = x.rows();
  const std::size_t n = x.cols();
  if (!(n > p)) {
    raise(ErrorCode::Domain, "server needs n > p, got p = " + std::to_string(p) +
                                 ", n = " + std::to_string(n));
  }
  std::vector<double> eigs = eigenvalues_hermitian(sample_covariance(x));
  for (double& v : eigs) v *= static_cast<double>(n);
  const double c = static_cast<double>(n) / static_cast<double>(p);
  return {server_id, lrt_statistic(eigs, p, c), p, n};
}

CoordinatorResult coordinate(std::span<const ServerResult> results,
                             std::span<const CltParams> params_h0, double epsilon,
                             std::span<const CltParams> params_h1) {
  if (results.empty()) raise(ErrorCode::InvalidArgument, "coordinator received no results");
  if (params_h0.size() != results.size()) {
    raise(ErrorCode::InvalidArgument, "got " + std::to_string(results.size()) + " results but " +
                                          std::to_string(params_h0.size()) + " H0 parameter sets");
  }
  if (!params_h1.empty() && params_h1.size() != results.size()) {
    raise(ErrorCode::InvalidArgument, "got " + std::to_string(results.size()) + " results but " +
                                          std::to_string(params_h1.size()) + " H1 parameter sets");
  }
  std::vector<std::size_t> order(results.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return results[a].server_id < results[b].server_id; });

  CoordinatorResult out;
  double var0 = 0.0;
  double mean1 = 0.0;
  double var1 = 0.0;
  for (std::size_t i : order) {
    const ServerResult& r = results[i];
    if (!std::isfinite(r.statistic)) {
      raise(ErrorCode::InvalidData, server_tag(r.server_id) + "non-finite statistic");
    }
    if (r.p != results[order.front()].p || r.n != results[order.front()].n) {
      raise(ErrorCode::InvalidArgument, server_tag(r.server_id) + "dimensions differ across servers");
    }
    out.l_d += r.statistic;
    out.mu_d += params_h0[i].mean(r.p);
    var0 += params_h0[i].sigma2;
    if (!params_h1.empty()) {
      mean1 += params_h1[i].mean(r.p);
      var1 += params_h1[i].sigma2;
    }
  }
  out.sigma_d = std::sqrt(var0);
  if (!(out.sigma_d > 0.0)) raise(ErrorCode::Domain, "aggregate variance is not positive");

  const GaussianLaw h0{out.mu_d, out.sigma_d};
  std::optional<GaussianLaw> h1;
  if (!params_h1.empty()) h1 = GaussianLaw{mean1, std::sqrt(var1)};

  DetectionReport& report = out.report;
  report.statistic = out.l_d;
  report.epsilon = epsilon;
  report.threshold = threshold(h0, epsilon);
  report.decision = decide(out.l_d, report.threshold);
  const ErrorProbabilities probs = error_probabilities(report.threshold, h0, h1);
  report.predicted_pfa = probs.pfa;
  report.predicted_pd = probs.pd;
  report.params_h0 = params_h0.front();
  if (!params_h1.empty()) report.params_h1 = params_h1.front();
  return out;
}

ScenarioConfig parse_scenario(const nlohmann::json& doc) {
  ScenarioConfig config;
  try {
    config.servers = doc.at("servers").get<std::size_t>();
    config.p = doc.at("p").get<std::size_t>();
    config.n = doc.at("n").get<std::size_t>();
    config.epsilon = doc.value("epsilon", 0.05);
    config.seed = doc.value("seed", std::uint64_t{0});
    config.trials = doc.value("trials", std::size_t{1});
    config.threads = doc.value("threads", std::size_t{0});
    const nlohmann::json source = doc.value("source", nlohmann::json::object());
    const std::string kind = source.value("kind", std::string("white"));
    std::optional<double> snr;
    if (source.contains("snr_db") && !source.at("snr_db").is_null()) {
      snr = source.at("snr_db").get<double>();
    }
    if (kind == "white") {
      config.source = SourceSpec::white_noise();
      config.source.snr_db = snr;
    } else if (kind == "ar") {
      config.source = SourceSpec::ar(source.at("r").get<double>(), snr);
    } else if (kind == "spiked") {
      config.source = SourceSpec::spiked(SpikeModel(source.at("deltas").get<std::vector<double>>()));
      config.source.snr_db = snr;
    } else {
      raise(ErrorCode::InvalidArgument, "unknown source kind '" + kind + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::InvalidArgument, std::string("malformed scenario: ") + e.what());
  }
  if (config.servers == 0) raise(ErrorCode::InvalidArgument, "scenario needs servers >= 1");
  if (!(config.n > config.p) || config.p == 0) {
    raise(ErrorCode::InvalidArgument, "scenario needs n > p >= 1");
  }
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0)) {
    raise(ErrorCode::InvalidArgument, "scenario epsilon must be in (0, 1)");
  }
  return config;
}

std::vector<ServerResult> compute_servers(std::span<const SnapshotMatrix> inputs,
                                          Execution execution, std::size_t threads) {
  std::vector<ServerResult> results(inputs.size());
  std::vector<std::exception_ptr> failures(inputs.size());
  auto work = [&](std::size_t i) {
    try {
      results[i] = server_compute(inputs[i], i + 1);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  };

  if (execution == Execution::Sequential || inputs.size() <= 1) {
    for (std::size_t i = 0; i < inputs.size(); ++i) work(i);
  } else {
    std::size_t workers = threads != 0 ? threads : std::thread::hardware_concurrency();
    workers = std::clamp<std::size_t>(workers, 1, inputs.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < inputs.size(); i = next++) work(i);
      });
    }
    for (std::thread& t : pool) t.join();
  }

  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (!failures[i]) continue;
    try {
      std::rethrow_exception(failures[i]);
    } catch (const Error& e) {
      raise(e.code(), server_tag(i + 1) + e.what());
    } catch (const std::exception& e) {
      raise(ErrorCode::NumericalFailure, server_tag(i + 1) + e.what());
    }
  }
  return results;
}

std::vector<SnapshotMatrix> scenario_inputs(const ScenarioConfig& config, std::uint64_t trial) {
  std::vector<SnapshotMatrix> inputs;
  inputs.reserve(config.servers);
  for (std::size_t i = 1; i <= config.servers; ++i) {
    const std::uint64_t seed = derive_seed(config.seed, {trial, i});
    SnapshotEnsemble one = acquire(config.source, AcquisitionMode::SpaceDistributed, config.p,
                                   config.n, 1, seed);
    inputs.push_back(one.snapshots().front());
  }
  return inputs;
}

CltParams scenario_params_h0(const ScenarioConfig& config) {
  return lrt_clt_closed(static_cast<double>(config.n) / static_cast<double>(config.p), SpikeModel{});
}

std::optional<CltParams> scenario_params_h1(const ScenarioConfig& config) {
  if (config.source.kind != SourceKind::Spiked || config.source.spikes.empty()) return std::nullopt;
  if (config.source.snr_db) return std::nullopt;
  const double c = static_cast<double>(config.n) / static_cast<double>(config.p);
  if (config.source.spikes.rank() == 1) return lrt_clt_closed(c, config.source.spikes);
  return clt_quadrature(lrt_function(c), c, config.source.spikes);
}

DistributedRun run_distributed(const ScenarioConfig& config, std::uint64_t trial,
                               Execution execution) {
  const std::vector<SnapshotMatrix> inputs = scenario_inputs(config, trial);
  DistributedRun run;
  run.trace = compute_servers(inputs, execution, config.threads);
  const std::vector<CltParams> h0(config.servers, scenario_params_h0(config));
  std::vector<CltParams> h1;
  if (auto params = scenario_params_h1(config)) h1.assign(config.servers, *params);
  run.result = coordinate(run.trace, h0, config.epsilon, h1);
  return run;
}

std::vector<std::pair<std::size_t, double>> mobility_track(
    std::span<const SnapshotEnsemble> ensembles, const RingLawParams& params, double quantile,
    const PipelineOptions& options) {
  std::vector<std::pair<std::size_t, double>> series;
  if (ensembles.empty()) return series;
  const std::size_t rows = ensembles.front().rows();
  const std::size_t cols = ensembles.front().cols();
  for (std::size_t k = 0; k < ensembles.size(); ++k) {
    const SnapshotEnsemble& e = ensembles[k];
    if (e.rows() != rows || e.cols() != cols) {
      raise(ErrorCode::InvalidStream, "ensemble " + std::to_string(k) + " is " +
                                          std::to_string(e.rows()) + "x" + std::to_string(e.cols()) +
                                          ", stream started at " + std::to_string(rows) + "x" +
                                          std::to_string(cols));
    }
    if (e.size() != params.factors() || std::abs(e.c_ratio() - params.c()) > 1e-12) {
      raise(ErrorCode::InvalidStream, "ensemble " + std::to_string(k) +
                                          " does not match the ring-law parameters (c, L)");
    }
    PipelineOptions local = options;
    local.seed = derive_seed(options.seed, {k});
    series.emplace_back(k, inner_radius_estimate(product_chain(e, local), quantile));
  }
  return series;
}

}  // namespace rmtsense
