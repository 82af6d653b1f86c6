#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rmtsense/rmt_core.hpp"

namespace rmtsense {

/// Iq32: 16-byte header ("RMTC", u32 N, u32 T, u32 reserved = 0) followed by
/// N*T little-endian float32 I/Q pairs in row-major order.
/// Csv: one matrix row per line, entries either "re+imj" literals or
/// interleaved re,im column pairs.
enum class CaptureFormat { Iq32, Csv };

struct CaptureFile {
  std::filesystem::path path;
  CaptureFormat format = CaptureFormat::Iq32;
  /// When set, the loaded shape must match (N, T).
  std::optional<std::pair<std::size_t, std::size_t>> dims;
};

/// Format from the extension: ".csv" is Csv, anything else Iq32.
CaptureFormat capture_format_for(const std::filesystem::path& path);

SnapshotMatrix load_capture(const CaptureFile& file);
void save_capture(const SnapshotMatrix& x, const CaptureFile& file);

/// Parses "1+2j", "-0.5-1e-3j", "3", "2j" into a complex number.
Complex parse_complex(std::string_view text);

enum class FigureKind { Scatter, Histogram, Curve, Series };

std::string_view to_string(FigureKind kind) noexcept;

/// Rows of numeric records; the column count is fixed by the kind:
/// Scatter re,im; Histogram bin_left,bin_right,density; Curve x,y; Series t,value.
struct FigureData {
  FigureKind kind = FigureKind::Curve;
  std::vector<std::vector<double>> rows;
};

/// Header line for the kind, e.g. "re,im".
std::string_view figure_header(FigureKind kind) noexcept;

/// Writes the header plus one CSV line per row, numbers in shortest round-trip form.
void emit_figure(const FigureData& data, const std::filesystem::path& path);
void write_figure(const FigureData& data, std::ostream& out);

FigureData scatter_figure(std::span<const Complex> points);

/// Density histogram (sum of density*width = 1). Zero bins picks the
/// Freedman-Diaconis width.
FigureData make_histogram(std::span<const double> values, std::size_t bins = 0);

/// Freedman-Diaconis bin count for the sample, at least 1.
std::size_t freedman_diaconis_bins(std::span<const double> values);

}  // namespace rmtsense
