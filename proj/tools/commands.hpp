#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rmtsense::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDetected = 1;
inline constexpr int kExitError = 2;
inline constexpr int kExitUsage = 64;

struct SpectrumOptions {
  std::string pipeline = "product";
  std::size_t antennas = 256;
  std::size_t samples = 512;
  std::size_t snapshots = 5;
  std::string source = "white";
  double r = 0.9;
  std::optional<double> snr_db;
  std::string mode = "time";
  std::uint64_t seed = 1;
  std::vector<std::filesystem::path> captures;
  std::size_t bins = 0;
  std::string prefix = "spectrum";
  std::filesystem::path out_dir;
};

struct LawsOptions {
  std::string law;
  double c = 0.5;
  std::size_t factors = 1;
  std::size_t points = 201;
  std::optional<std::filesystem::path> output;
};

struct DetectOptions {
  std::optional<std::filesystem::path> input;
  std::size_t p = 200;
  std::size_t n = 400;
  std::vector<double> spikes;
  std::vector<double> h1_spikes;
  double epsilon = 0.05;
  std::uint64_t seed = 1;
};

struct DistributedOptions {
  std::filesystem::path config;
  std::optional<std::size_t> trials;
  std::uint64_t first_trial = 0;
  bool sequential = false;
  std::optional<std::filesystem::path> trace;
};

struct MobilityOptions {
  std::optional<std::filesystem::path> captures_dir;
  std::string schedule = "white:8,ar:8";
  std::size_t antennas = 64;
  std::size_t samples = 128;
  std::size_t snapshots = 5;
  double r = 0.9;
  double snr_db = 0.0;
  double quantile = 0.02;
  std::uint64_t seed = 1;
};

int run_spectrum(const SpectrumOptions& options);
int run_laws(const LawsOptions& options);
int run_detect(const DetectOptions& options);
int run_distributed(const DistributedOptions& options);
int run_mobility(const MobilityOptions& options);
int run_selftest();

/// RMTSENSE_OUT_DIR when set, otherwise the working directory.
std::filesystem::path default_out_dir();

}  // namespace rmtsense::cli
