#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rmtsense/detector.hpp"
#include "rmtsense/lss_clt.hpp"
#include "rmtsense/rmt_core.hpp"
#include "rmtsense/spectral_laws.hpp"

namespace rmtsense {

enum class SourceKind { WhiteNoise, Spiked, Ar };

std::string_view to_string(SourceKind kind) noexcept;

/// A signal source. `r` is the AR coefficient (Ar only); `spikes` the Model-A
/// offsets (Spiked only). With snr_db set the output is
/// signal * 10^(snr_db/20) + unit white noise; -inf gives pure noise.
struct SourceSpec {
  SourceKind kind = SourceKind::WhiteNoise;
  double r = 0.0;
  SpikeModel spikes;
  std::optional<double> snr_db;
  std::uint64_t seed = 0;

  static SourceSpec white_noise(std::uint64_t seed = 0);
  static SourceSpec ar(double r, std::optional<double> snr_db = std::nullopt, std::uint64_t seed = 0);
  static SourceSpec spiked(SpikeModel spikes, std::uint64_t seed = 0);
};

/// y(0) = (1+r) x(0), y(n) = (1+r) x(n) + r y(n-1) with x standard normal.
/// 10*ceil(1/(1-|r|)) leading samples are generated and discarded.
std::vector<double> gen_ar_signal(double r, std::size_t length, std::uint64_t seed);

/// p x n matrix with i.i.d. complex Gaussian columns of covariance
/// I + sum_l delta_l u_l u_l^H with {u_l} a seeded Haar-random orthonormal set.
SnapshotMatrix gen_spiked_samples(std::size_t p, std::size_t n, const SpikeModel& spikes,
                                  std::uint64_t seed);

/// L snapshots of N x T samples from `source`.
/// TimeEvolving: one continuing stream; row i of snapshot j reads the stream at
/// j*T + i + t (Ar), or shares spike directions across snapshots (Spiked).
/// SpaceDistributed: every snapshot comes from an independent stream.
SnapshotEnsemble acquire(const SourceSpec& source, AcquisitionMode mode, std::size_t antennas,
                         std::size_t samples, std::size_t snapshots, std::uint64_t seed);

struct ServerResult {
  std::size_t server_id = 0;
  double statistic = 0.0;
  std::size_t p = 0;
  std::size_t n = 0;
};

struct CoordinatorResult {
  double l_d = 0.0;
  double mu_d = 0.0;
  double sigma_d = 0.0;
  DetectionReport report;
};

nlohmann::json to_json(const CoordinatorResult& result);

/// Sample covariance, its eigenvalues scaled by n, and the LRT statistic (needs n > p).
ServerResult server_compute(const SnapshotMatrix& x, std::size_t server_id = 1);

/// L_D = sum L_i in server_id order, mu_D = sum (p_i mu_i + sum mu_bar_i),
/// sigma_D^2 = sum sigma_i^2 (servers hold independent data).
CoordinatorResult coordinate(std::span<const ServerResult> results,
                             std::span<const CltParams> params_h0, double epsilon,
                             std::span<const CltParams> params_h1 = {});

struct ScenarioConfig {
  std::size_t servers = 1;
  std::size_t p = 0;
  std::size_t n = 0;
  SourceSpec source;
  double epsilon = 0.05;
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  /// Worker threads for the server phase; 0 picks hardware concurrency.
  std::size_t threads = 0;
};

/// {servers, p, n, source{kind, r | deltas, snr_db}, epsilon, seed, trials, threads}.
ScenarioConfig parse_scenario(const nlohmann::json& doc);

enum class Execution { Sequential, Parallel };

struct DistributedRun {
  CoordinatorResult result;
  std::vector<ServerResult> trace;
};

/// Runs server_compute on `inputs` (server_id = index + 1). Parallel execution
/// gives bit-identical results; a failing server is reported with its id.
std::vector<ServerResult> compute_servers(std::span<const SnapshotMatrix> inputs,
                                          Execution execution, std::size_t threads = 0);

/// Per-server data for one trial; server i uses derive_seed(seed, {trial, i}).
std::vector<SnapshotMatrix> scenario_inputs(const ScenarioConfig& config, std::uint64_t trial);

/// H0 law per server and, for a spiked source, the H1 law.
CltParams scenario_params_h0(const ScenarioConfig& config);
std::optional<CltParams> scenario_params_h1(const ScenarioConfig& config);

DistributedRun run_distributed(const ScenarioConfig& config, std::uint64_t trial,
                               Execution execution = Execution::Parallel);

/// (index, inner_radius_estimate(product_chain(ensemble))) per ensemble.
/// Every ensemble must match params (N/T and L) and the first ensemble's shape.
std::vector<std::pair<std::size_t, double>> mobility_track(
    std::span<const SnapshotEnsemble> ensembles, const RingLawParams& params,
    double quantile = kDefaultInnerQuantile, const PipelineOptions& options = {});

}  // namespace rmtsense
