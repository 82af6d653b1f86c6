#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rmtsense/capture_io.hpp"
#include "rmtsense/detector.hpp"
#include "rmtsense/empirical.hpp"
#include "rmtsense/error.hpp"
#include "rmtsense/random.hpp"
#include "rmtsense/selftest.hpp"
#include "rmtsense/sensing_sim.hpp"
#include "rmtsense/spectral_laws.hpp"

namespace rmtsense::cli {
namespace {

namespace fs = std::filesystem;

AcquisitionMode parse_mode(const std::string& mode) {
  if (mode == "time") return AcquisitionMode::TimeEvolving;
  if (mode == "space") return AcquisitionMode::SpaceDistributed;
  raise(ErrorCode::InvalidArgument, "unknown acquisition mode '" + mode + "' (time|space)");
}

SourceSpec make_source(const std::string& kind, double r, std::optional<double> snr_db) {
  if (kind == "white") {
    SourceSpec spec = SourceSpec::white_noise();
    spec.snr_db = snr_db;
    return spec;
  }
  if (kind == "ar") return SourceSpec::ar(r, snr_db);
  raise(ErrorCode::InvalidArgument, "unknown source '" + kind + "' (white|ar)");
}

std::vector<double> grid(double lo, double hi, std::size_t points) {
  if (points < 2) raise(ErrorCode::InvalidArgument, "a curve needs at least 2 points");
  std::vector<double> xs(points);
  for (std::size_t i = 0; i < points; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  xs.back() = hi;
  return xs;
}

FigureData curve(const std::vector<double>& xs, const std::function<double(double)>& f) {
  FigureData data{FigureKind::Curve, {}};
  for (double x : xs) {
    const double y = f(x);
    if (std::isfinite(y)) data.rows.push_back({x, y});
  }
  return data;
}

FigureData ring_curve(double c, std::size_t factors, std::size_t points) {
  const RingLawParams params(c, factors);
  return curve(grid(ring_inner_radius(params), 1.0, points),
               [&](double r) { return ring_radial_pdf(r, params); });
}

std::optional<CltParams> h1_params(double c, const std::vector<double>& deltas) {
  if (deltas.empty()) return std::nullopt;
  const SpikeModel spikes(deltas);
  if (spikes.rank() == 1) return lrt_clt_closed(c, spikes);
  return clt_quadrature(lrt_function(c), c, spikes);
}

void write_out(const fs::path& path, const FigureData& data) {
  emit_figure(data, path);
  std::cerr << "wrote " << path.string() << " (" << data.rows.size() << " rows)\n";
}

std::vector<fs::path> sorted_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) raise(ErrorCode::Io, dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

fs::path default_out_dir() {
  if (const char* env = std::getenv("RMTSENSE_OUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return fs::current_path();
}

int run_spectrum(const SpectrumOptions& options) {
  const fs::path out_dir = options.out_dir.empty() ? default_out_dir() : options.out_dir;
  fs::create_directories(out_dir);
  const fs::path base = out_dir / options.prefix;

  if (options.pipeline == "ginibre") {
    const std::size_t k = options.snapshots;
    const std::size_t n = options.antennas;
    std::vector<SnapshotMatrix> factors;
    for (std::size_t j = 0; j < k; ++j) factors.push_back(gen_ginibre(n, n, derive_seed(options.seed, {j})));
    PipelineOptions pipeline;
    pipeline.raw = true;
    const ComplexSpectrum spectrum =
        product_chain(SnapshotEnsemble(std::move(factors), AcquisitionMode::SpaceDistributed), pipeline);
    const std::vector<double> squared = ginibre_product_squared_singular_values(k, n, options.seed);
    write_out(base.string() + "_scatter.csv", scatter_figure(spectrum.values));
    write_out(base.string() + "_hist.csv", make_histogram(squared, options.bins));
    const double edge = ginibre_support_max(k);
    write_out(base.string() + "_law.csv",
              curve(grid(edge / static_cast<double>(4 * n), edge, 201),
                    [k](double x) { return ginibre_product_pdf(x, k); }));
    return kExitOk;
  }

  const AcquisitionMode mode = parse_mode(options.mode);
  std::optional<SnapshotEnsemble> ensemble;
  if (!options.captures.empty()) {
    std::vector<SnapshotMatrix> snapshots;
    for (const fs::path& path : options.captures) {
      snapshots.push_back(load_capture({path, capture_format_for(path), std::nullopt}));
    }
    ensemble.emplace(std::move(snapshots), mode);
  } else {
    ensemble.emplace(acquire(make_source(options.source, options.r, options.snr_db), mode,
                             options.antennas, options.samples, options.snapshots, options.seed));
  }

  PipelineOptions pipeline;
  pipeline.seed = options.seed;
  ComplexSpectrum spectrum;
  std::size_t law_factors = 1;
  if (options.pipeline == "product") {
    spectrum = product_chain(*ensemble, pipeline);
    law_factors = ensemble->size();
  } else if (options.pipeline == "gmean") {
    spectrum = geometric_mean_spectrum(*ensemble, pipeline);
  } else if (options.pipeline == "amean") {
    pipeline.normalize = true;
    spectrum = arithmetic_mean_spectrum(*ensemble, pipeline);
  } else {
    raise(ErrorCode::InvalidArgument,
          "unknown pipeline '" + options.pipeline + "' (product|gmean|amean|ginibre)");
  }
  const double c = ensemble->c_ratio();
  write_out(base.string() + "_scatter.csv", scatter_figure(spectrum.values));
  write_out(base.string() + "_hist.csv", make_histogram(empirical::moduli(spectrum.values), options.bins));
  write_out(base.string() + "_law.csv", ring_curve(c, law_factors, 201));
  const RingStats stats = inside_ring_count(spectrum, RingLawParams(c, law_factors));
  std::cerr << "pipeline " << options.pipeline << ": c = " << c << ", L = " << ensemble->size()
            << ", inner estimate = " << inner_radius_estimate(spectrum)
            << ", inside inner circle = " << stats.inside_count << "/" << stats.total << "\n";
  return kExitOk;
}

int run_laws(const LawsOptions& options) {
  FigureData data;
  if (options.law == "ring") {
    data = ring_curve(options.c, options.factors, options.points);
  } else if (options.law == "mp") {
    const MpSupport support = mp_support(options.c);
    data = curve(grid(support.lower, support.upper, options.points),
                 [&](double x) { return mp_pdf(x, options.c); });
  } else if (options.law == "ginibre") {
    const std::size_t k = options.factors;
    const double edge = ginibre_support_max(k);
    data = curve(grid(0.0, edge, options.points), [k](double x) { return ginibre_product_pdf(x, k); });
  } else if (options.law == "ginibre-k2") {
    data = curve(grid(0.0, 27.0 / 4.0, options.points), ginibre_product_pdf_k2);
  } else {
    raise(ErrorCode::InvalidArgument, "choose a law: --ring, --mp, --ginibre or --ginibre-k2");
  }
  if (options.output) {
    write_out(*options.output, data);
  } else {
    write_figure(data, std::cout);
  }
  return kExitOk;
}

int run_detect(const DetectOptions& options) {
  const SnapshotMatrix x =
      options.input ? load_capture({*options.input, capture_format_for(*options.input), std::nullopt})
                    : gen_spiked_samples(options.p, options.n, SpikeModel(options.spikes), options.seed);
  const ServerResult server = server_compute(x);
  const double c = static_cast<double>(server.n) / static_cast<double>(server.p);
  const CltParams h0 = lrt_clt_closed(c, SpikeModel{});
  const DetectionReport report =
      detect(server.statistic, h0, h1_params(c, options.h1_spikes), server.p, options.epsilon);
  nlohmann::json out = to_json(report);
  out["p"] = server.p;
  out["n"] = server.n;
  std::cout << out.dump(2) << '\n';
  return report.decision == Decision::SignalPresent ? kExitDetected : kExitOk;
}

int run_distributed(const DistributedOptions& options) {
  std::ifstream in(options.config);
  if (!in) raise(ErrorCode::Io, "cannot open scenario " + options.config.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::InvalidArgument, options.config.string() + ": " + e.what());
  }
  const ScenarioConfig config = parse_scenario(doc);
  const std::size_t trials = options.trials.value_or(config.trials);
  const Execution execution = options.sequential ? Execution::Sequential : Execution::Parallel;

  if (trials <= 1) {
    const DistributedRun run = rmtsense::run_distributed(config, options.first_trial, execution);
    const fs::path trace_path = options.trace.value_or(default_out_dir() / "distributed_trace.csv");
    std::ofstream trace_out(trace_path);
    if (!trace_out) raise(ErrorCode::Io, "cannot write trace " + trace_path.string());
    trace_out << "server_id,L_i\n";
    for (const ServerResult& s : run.trace) {
      trace_out << s.server_id << ',' << nlohmann::json(s.statistic).dump() << '\n';
    }
    std::cerr << "wrote " << trace_path.string() << '\n';
    nlohmann::json out = to_json(run.result);
    out["servers"] = config.servers;
    std::cout << out.dump(2) << '\n';
    return kExitOk;
  }

  std::size_t detections = 0;
  std::vector<double> totals;
  DistributedRun last;
  for (std::size_t t = 0; t < trials; ++t) {
    last = rmtsense::run_distributed(config, options.first_trial + t, execution);
    totals.push_back(last.result.l_d);
    if (last.result.report.decision == Decision::SignalPresent) ++detections;
  }
  nlohmann::json out = {
      {"trials", trials},
      {"servers", config.servers},
      {"detections", detections},
      {"detection_rate", static_cast<double>(detections) / static_cast<double>(trials)},
      {"threshold", last.result.report.threshold},
      {"mu_d", last.result.mu_d},
      {"sigma_d", last.result.sigma_d},
      {"predicted_pfa", last.result.report.predicted_pfa},
      {"predicted_pd", nullptr},
      {"mean_l_d", empirical::mean(totals)},
      {"variance_l_d", empirical::variance(totals)},
  };
  if (last.result.report.predicted_pd) out["predicted_pd"] = *last.result.report.predicted_pd;
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

int run_mobility(const MobilityOptions& options) {
  std::vector<SnapshotEnsemble> stream;
  if (options.captures_dir) {
    const std::vector<fs::path> files = sorted_files(*options.captures_dir);
    for (std::size_t start = 0; start + options.snapshots <= files.size(); start += options.snapshots) {
      std::vector<SnapshotMatrix> snapshots;
      for (std::size_t j = 0; j < options.snapshots; ++j) {
        const fs::path& path = files[start + j];
        snapshots.push_back(load_capture({path, capture_format_for(path), std::nullopt}));
      }
      stream.emplace_back(std::move(snapshots), AcquisitionMode::TimeEvolving);
    }
    if (files.size() % options.snapshots != 0) {
      std::cerr << "ignoring " << files.size() % options.snapshots << " trailing capture(s)\n";
    }
  } else {
    std::stringstream schedule(options.schedule);
    std::string segment;
    std::size_t index = 0;
    while (std::getline(schedule, segment, ',')) {
      const auto colon = segment.find(':');
      if (colon == std::string::npos) {
        raise(ErrorCode::InvalidArgument, "schedule segment '" + segment + "' is not kind:count");
      }
      const std::string kind = segment.substr(0, colon);
      const std::size_t count = std::stoul(segment.substr(colon + 1));
      const SourceSpec source = make_source(kind, options.r, kind == "ar" ? std::optional(options.snr_db)
                                                                          : std::nullopt);
      for (std::size_t i = 0; i < count; ++i, ++index) {
        stream.push_back(acquire(source, AcquisitionMode::TimeEvolving, options.antennas,
                                 options.samples, options.snapshots,
                                 derive_seed(options.seed, {index})));
      }
    }
  }
  if (stream.empty()) {
    write_figure(FigureData{FigureKind::Series, {}}, std::cout);
    return kExitOk;
  }
  const RingLawParams params(stream.front().c_ratio(), stream.front().size());
  PipelineOptions pipeline;
  pipeline.seed = options.seed;
  FigureData series{FigureKind::Series, {}};
  for (const auto& [t, r] : mobility_track(stream, params, options.quantile, pipeline)) {
    series.rows.push_back({static_cast<double>(t), r});
  }
  write_figure(series, std::cout);
  return kExitOk;
}

int run_selftest() {
  const SelftestReport report = rmtsense::run_selftest();
  nlohmann::json checks = nlohmann::json::array();
  for (const SelftestCheck& check : report.checks) {
    checks.push_back({{"name", check.name}, {"passed", check.passed}, {"detail", check.detail}});
    std::cerr << (check.passed ? "PASS " : "FAIL ") << check.name << ": " << check.detail << '\n';
  }
  std::cout << nlohmann::json{{"passed", report.passed()}, {"checks", checks}}.dump(2) << '\n';
  return report.passed() ? kExitOk : kExitError;
}

}  // namespace rmtsense::cli
