#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "rmtsense/error.hpp"

using namespace rmtsense::cli;

int main(int argc, char** argv) {
  CLI::App app{"Random-matrix spectrum sensing toolkit"};
  app.require_subcommand(1);

  SpectrumOptions spectrum;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Run a spectrum pipeline and emit figure data");
  spectrum_cmd->add_option("--pipeline", spectrum.pipeline, "product|gmean|amean|ginibre")
      ->check(CLI::IsMember({"product", "gmean", "amean", "ginibre"}));
  spectrum_cmd->add_option("-N,--antennas", spectrum.antennas, "Rows per snapshot");
  spectrum_cmd->add_option("-T,--samples", spectrum.samples, "Columns per snapshot");
  spectrum_cmd->add_option("-L,--snapshots", spectrum.snapshots, "Snapshots (factors for ginibre)");
  spectrum_cmd->add_option("--source", spectrum.source, "white|ar")->check(CLI::IsMember({"white", "ar"}));
  spectrum_cmd->add_option("--r", spectrum.r, "AR coefficient");
  spectrum_cmd->add_option("--snr-db", spectrum.snr_db, "Mix the source into unit noise at this SNR");
  spectrum_cmd->add_option("--mode", spectrum.mode, "time|space")->check(CLI::IsMember({"time", "space"}));
  spectrum_cmd->add_option("--seed", spectrum.seed);
  spectrum_cmd->add_option("--capture", spectrum.captures, "Capture files forming the ensemble")
      ->check(CLI::ExistingFile);
  spectrum_cmd->add_option("--bins", spectrum.bins, "Histogram bins (0: Freedman-Diaconis)");
  spectrum_cmd->add_option("--prefix", spectrum.prefix, "Output file prefix");
  spectrum_cmd->add_option("--out-dir", spectrum.out_dir, "Output directory (default $RMTSENSE_OUT_DIR or .)");

  LawsOptions laws;
  auto* laws_cmd = app.add_subcommand("laws", "Tabulate a limiting density as a Curve CSV");
  auto* law_group = laws_cmd->add_option_group("law");
  law_group->add_flag_callback("--ring", [&] { laws.law = "ring"; }, "Ring radial density (c, L)");
  law_group->add_flag_callback("--mp", [&] { laws.law = "mp"; }, "Marchenko-Pastur density (c >= 1)");
  law_group->add_flag_callback("--ginibre", [&] { laws.law = "ginibre"; }, "k-fold Ginibre product density (--L = k)");
  law_group->add_flag_callback("--ginibre-k2", [&] { laws.law = "ginibre-k2"; }, "k = 2 closed form");
  law_group->require_option(1);
  laws_cmd->add_option("--c", laws.c, "Ratio (N/T for ring, n/p for mp)");
  laws_cmd->add_option("--L,-k", laws.factors, "Factor count");
  laws_cmd->add_option("--points", laws.points, "Grid points");
  laws_cmd->add_option("-o,--output", laws.output, "Write to a file instead of standard output");

  DetectOptions detect;
  auto* detect_cmd = app.add_subcommand("detect", "Single-matrix LRT detection; exit 1 when a signal is detected");
  detect_cmd->add_option("--input", detect.input, "Capture file (Iq32 or .csv)")->check(CLI::ExistingFile);
  detect_cmd->add_option("--p", detect.p, "Synthetic dimension");
  detect_cmd->add_option("--n", detect.n, "Synthetic sample count");
  detect_cmd->add_option("--spike", detect.spikes, "Spike offsets in the synthetic data");
  detect_cmd->add_option("--h1-spike", detect.h1_spikes, "Spike offsets of the alternative used for predicted_pd");
  detect_cmd->add_option("--epsilon", detect.epsilon, "Target false-alarm rate");
  detect_cmd->add_option("--seed", detect.seed);

  DistributedOptions distributed;
  auto* distributed_cmd = app.add_subcommand("distributed", "Run a multi-server detection scenario");
  distributed_cmd->add_option("config", distributed.config, "Scenario JSON")->required()->check(CLI::ExistingFile);
  distributed_cmd->add_option("--trials", distributed.trials, "Override the scenario trial count");
  distributed_cmd->add_option("--first-trial", distributed.first_trial, "Index of the first trial");
  distributed_cmd->add_flag("--sequential", distributed.sequential, "Run servers one after another");
  distributed_cmd->add_option("--trace", distributed.trace, "Per-server trace CSV path");

  MobilityOptions mobility;
  auto* mobility_cmd = app.add_subcommand("mobility", "Track the inner-radius estimate over a stream");
  mobility_cmd->add_option("--captures-dir", mobility.captures_dir, "Directory of captures, L per ensemble")
      ->check(CLI::ExistingDirectory);
  mobility_cmd->add_option("--schedule", mobility.schedule, "Synthetic schedule, e.g. white:8,ar:8");
  mobility_cmd->add_option("-N,--antennas", mobility.antennas);
  mobility_cmd->add_option("-T,--samples", mobility.samples);
  mobility_cmd->add_option("-L,--snapshots", mobility.snapshots);
  mobility_cmd->add_option("--r", mobility.r, "AR coefficient of ar segments");
  mobility_cmd->add_option("--snr-db", mobility.snr_db, "SNR of ar segments");
  mobility_cmd->add_option("--quantile", mobility.quantile, "Inner-radius quantile");
  mobility_cmd->add_option("--seed", mobility.seed);

  auto* selftest_cmd = app.add_subcommand("selftest", "Check the library's oracle identities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return kExitUsage;
  }

  try {
    if (*spectrum_cmd) return run_spectrum(spectrum);
    if (*laws_cmd) return run_laws(laws);
    if (*detect_cmd) return run_detect(detect);
    if (*distributed_cmd) return run_distributed(distributed);
    if (*mobility_cmd) return run_mobility(mobility);
    if (*selftest_cmd) return run_selftest();
  } catch (const rmtsense::Error& e) {
    std::cerr << "error [" << rmtsense::to_string(e.code()) << "]: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}
