#include "rmtsense/capture_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "rmtsense/error.hpp"

namespace rmtsense {
namespace {

constexpr std::array<char, 4> kMagic = {'R', 'M', 'T', 'C'};
constexpr std::size_t kHeaderBytes = 16;
constexpr std::size_t kMaxHistogramBins = 100000;

std::uint32_t read_u32(const std::string& bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int k = 3; k >= 0; --k) v = (v << 8) | static_cast<unsigned char>(bytes[offset + k]);
  return v;
}

void write_u32(std::string& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xFF));
}

float read_f32(const std::string& bytes, std::size_t offset) {
  return std::bit_cast<float>(read_u32(bytes, offset));
}

void write_f32(std::string& out, float v) { write_u32(out, std::bit_cast<std::uint32_t>(v)); }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) raise(ErrorCode::Io, "write failed for " + path.string());
}

std::string format_number(double v) {
  std::array<char, 32> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), result.ptr);
}

double parse_real(std::string_view text, std::string_view whole) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), v);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size() || text.empty()) {
    raise(ErrorCode::Format, "cannot parse number '" + std::string(whole) + "'");
  }
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string complex_literal(Complex z) {
  const double im = z.imag();
  return format_number(z.real()) + (std::signbit(im) ? "-" : "+") + format_number(std::abs(im)) + "j";
}

SnapshotMatrix load_iq32(const std::string& bytes, const std::filesystem::path& path) {
  const std::string where = " in " + path.string();
  if (bytes.size() < kHeaderBytes) {
    raise(ErrorCode::Format, "truncated header at byte offset " + std::to_string(bytes.size()) +
                                 ": expected " + std::to_string(kHeaderBytes) + " bytes" + where);
  }
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    raise(ErrorCode::Format, "bad magic at byte offset 0 (expected \"RMTC\")" + where);
  }
  const std::uint32_t n = read_u32(bytes, 4);
  const std::uint32_t t = read_u32(bytes, 8);
  if (read_u32(bytes, 12) != 0) {
    raise(ErrorCode::Format, "non-zero reserved field at byte offset 12" + where);
  }
  if (n == 0 || t == 0) {
    raise(ErrorCode::Dimension, "header declares an empty " + std::to_string(n) + "x" +
                                    std::to_string(t) + " matrix" + where);
  }
  const std::size_t expected = static_cast<std::size_t>(n) * t * 8;
  const std::size_t actual = bytes.size() - kHeaderBytes;
  if (actual != expected) {
    raise(ErrorCode::Format,
          "payload length mismatch at byte offset " +
              std::to_string(kHeaderBytes + std::min(actual, expected)) + ": expected " +
              std::to_string(expected) + " payload bytes, got " + std::to_string(actual) + where);
  }
  CMatrix m(n, t);
  std::size_t offset = kHeaderBytes;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      m(i, j) = Complex(read_f32(bytes, offset), read_f32(bytes, offset + 4));
      offset += 8;
    }
  }
  return SnapshotMatrix(std::move(m));
}

SnapshotMatrix load_csv(const std::string& text, const std::filesystem::path& path) {
  std::vector<std::vector<Complex>> rows;
  std::size_t offset = 0;
  std::size_t line_number = 0;
  const bool literal = text.find('j') != std::string::npos;
  while (offset <= text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string::npos) end = text.size();
    ++line_number;
    const std::string_view line = trim(std::string_view(text).substr(offset, end - offset));
    const std::size_t line_offset = offset;
    offset = end + 1;
    if (line.empty() || line.front() == '#') continue;

    const auto fields = split_commas(line);
    std::vector<Complex> row;
    try {
      if (literal) {
        for (auto f : fields) row.push_back(parse_complex(f));
      } else {
        if (fields.size() % 2 != 0) {
          raise(ErrorCode::Format, "odd number of columns for re,im pairs");
        }
        for (std::size_t k = 0; k < fields.size(); k += 2) {
          row.emplace_back(parse_real(fields[k], fields[k]), parse_real(fields[k + 1], fields[k + 1]));
        }
      }
    } catch (const Error& e) {
      raise(ErrorCode::Format, path.string() + " line " + std::to_string(line_number) +
                                   " (byte offset " + std::to_string(line_offset) + "): " + e.what());
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      raise(ErrorCode::Dimension, path.string() + " line " + std::to_string(line_number) + " has " +
                                      std::to_string(row.size()) + " entries, expected " +
                                      std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) raise(ErrorCode::Format, path.string() + " contains no data rows");
  CMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return SnapshotMatrix(std::move(m));
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

CaptureFormat capture_format_for(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? CaptureFormat::Csv : CaptureFormat::Iq32;
}

SnapshotMatrix load_capture(const CaptureFile& file) {
  const std::string bytes = read_file(file.path);
  SnapshotMatrix x = file.format == CaptureFormat::Iq32 ? load_iq32(bytes, file.path)
                                                        : load_csv(bytes, file.path);
  if (file.dims && (x.rows() != file.dims->first || x.cols() != file.dims->second)) {
    raise(ErrorCode::Dimension, file.path.string() + " holds " + std::to_string(x.rows()) + "x" +
                                    std::to_string(x.cols()) + ", declared " +
                                    std::to_string(file.dims->first) + "x" +
                                    std::to_string(file.dims->second));
  }
  return x;
}

void save_capture(const SnapshotMatrix& x, const CaptureFile& file) {
  if (file.dims && (x.rows() != file.dims->first || x.cols() != file.dims->second)) {
    raise(ErrorCode::Dimension, "matrix is " + std::to_string(x.rows()) + "x" +
                                    std::to_string(x.cols()) + ", declared " +
                                    std::to_string(file.dims->first) + "x" +
                                    std::to_string(file.dims->second));
  }
  const CMatrix& m = x.data();
  std::string out;
  if (file.format == CaptureFormat::Iq32) {
    out.reserve(kHeaderBytes + x.rows() * x.cols() * 8);
    out.append(kMagic.data(), kMagic.size());
    write_u32(out, static_cast<std::uint32_t>(x.rows()));
    write_u32(out, static_cast<std::uint32_t>(x.cols()));
    write_u32(out, 0);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        write_f32(out, static_cast<float>(m(i, j).real()));
        write_f32(out, static_cast<float>(m(i, j).imag()));
      }
    }
  } else {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (j > 0) out.push_back(',');
        out += complex_literal(m(i, j));
      }
      out.push_back('\n');
    }
  }
  write_file(file.path, out);
}

Complex parse_complex(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) raise(ErrorCode::Format, "empty complex literal");
  const char last = s.back();
  if (last != 'j' && last != 'i') return {parse_real(s, text), 0.0};

  const std::string_view body = s.substr(0, s.size() - 1);
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string_view re = split == std::string_view::npos ? std::string_view{} : body.substr(0, split);
  std::string_view im = split == std::string_view::npos ? body : body.substr(split);
  double imag = 0.0;
  if (im.empty() || im == "+") {
    imag = 1.0;
  } else if (im == "-") {
    imag = -1.0;
  } else {
    imag = parse_real(im, text);
  }
  return {re.empty() ? 0.0 : parse_real(re, text), imag};
}

std::string_view to_string(FigureKind kind) noexcept {
  switch (kind) {
    case FigureKind::Scatter: return "scatter";
    case FigureKind::Histogram: return "histogram";
    case FigureKind::Curve: return "curve";
    case FigureKind::Series: return "series";
  }
  return "curve";
}

std::string_view figure_header(FigureKind kind) noexcept {
  switch (kind) {
    case FigureKind::Scatter: return "re,im";
    case FigureKind::Histogram: return "bin_left,bin_right,density";
    case FigureKind::Curve: return "x,y";
    case FigureKind::Series: return "t,value";
  }
  return "x,y";
}

void write_figure(const FigureData& data, std::ostream& out) {
  const std::size_t width = data.kind == FigureKind::Histogram ? 3 : 2;
  out << figure_header(data.kind) << '\n';
  for (std::size_t r = 0; r < data.rows.size(); ++r) {
    const auto& row = data.rows[r];
    if (row.size() != width) {
      raise(ErrorCode::InvalidArgument, std::string(to_string(data.kind)) + " row " +
                                            std::to_string(r) + " has " +
                                            std::to_string(row.size()) + " fields, expected " +
                                            std::to_string(width));
    }
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k > 0) out << ',';
      out << format_number(row[k]);
    }
    out << '\n';
  }
}

void emit_figure(const FigureData& data, const std::filesystem::path& path) {
  std::ostringstream buffer;
  write_figure(data, buffer);
  write_file(path, buffer.str());
}

FigureData scatter_figure(std::span<const Complex> points) {
  FigureData data{FigureKind::Scatter, {}};
  data.rows.reserve(points.size());
  for (const Complex& z : points) data.rows.push_back({z.real(), z.imag()});
  return data;
}

std::size_t freedman_diaconis_bins(std::span<const double> values) {
  if (values.size() < 2) return 1;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double range = sorted.back() - sorted.front();
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  const double width = 2.0 * iqr / std::cbrt(static_cast<double>(sorted.size()));
  if (!(width > 0.0) || !(range > 0.0)) return 1;
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(range / width)), 1,
                                 kMaxHistogramBins);
}

FigureData make_histogram(std::span<const double> values, std::size_t bins) {
  FigureData data{FigureKind::Histogram, {}};
  if (values.empty()) return data;
  for (double v : values) {
    if (!std::isfinite(v)) raise(ErrorCode::InvalidArgument, "histogram input is not finite");
  }
  if (bins == 0) bins = freedman_diaconis_bins(values);
  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  double lo = *min_it;
  double hi = *max_it;
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    auto k = static_cast<std::size_t>((v - lo) / width);
    counts[std::min(k, bins - 1)]++;
  }
  const double total = static_cast<double>(values.size());
  for (std::size_t k = 0; k < bins; ++k) {
    const double left = lo + width * static_cast<double>(k);
    const double right = k + 1 == bins ? hi : lo + width * static_cast<double>(k + 1);
    data.rows.push_back({left, right, static_cast<double>(counts[k]) / (total * (right - left))});
  }
  return data;
}

}  // namespace rmtsense
