#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "rmtsense/capture_io.hpp"
#include "rmtsense/random.hpp"
#include "test_support.hpp"

namespace rmtsense {
namespace {

namespace fs = std::filesystem;
using testing::throws_code;

class CaptureIo : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("rmtsense_io_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  std::string read_bytes(const fs::path& p) const {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  void write_bytes(const fs::path& p, const std::string& bytes) const {
    std::ofstream out(p, std::ios::binary);
    out << bytes;
  }

  fs::path dir_;
};

TEST_F(CaptureIo, Iq32RoundTripIsExactForFloatValues) {
  const CMatrix original = gen_ginibre(7, 13, 3).data();
  CaptureFile file{path("a.iq"), CaptureFormat::Iq32, std::nullopt};
  save_capture(SnapshotMatrix(original), file);
  EXPECT_EQ(fs::file_size(file.path), 16u + 7u * 13u * 8u);
  const SnapshotMatrix loaded = load_capture(file);
  ASSERT_EQ(loaded.rows(), 7u);
  ASSERT_EQ(loaded.cols(), 13u);
  for (Eigen::Index i = 0; i < original.size(); ++i) {
    EXPECT_EQ(loaded.data()(i).real(), static_cast<double>(static_cast<float>(original(i).real())));
    EXPECT_EQ(loaded.data()(i).imag(), static_cast<double>(static_cast<float>(original(i).imag())));
  }
  // A second save of the loaded matrix is byte-identical.
  CaptureFile again{path("b.iq"), CaptureFormat::Iq32, std::nullopt};
  save_capture(loaded, again);
  EXPECT_EQ(read_bytes(file.path), read_bytes(again.path));
}

TEST_F(CaptureIo, Iq32HeaderLayout) {
  CMatrix m(1, 2);
  m(0, 0) = Complex(1.0, -2.0);
  m(0, 1) = Complex(0.5, 0.0);
  save_capture(SnapshotMatrix(m), {path("h.iq"), CaptureFormat::Iq32, std::nullopt});
  const std::string bytes = read_bytes(path("h.iq"));
  ASSERT_EQ(bytes.size(), 32u);
  EXPECT_EQ(bytes.substr(0, 4), "RMTC");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[8], 2);
  EXPECT_EQ(bytes.substr(12, 4), std::string(4, '\0'));
  float first = 0.0f;
  std::memcpy(&first, bytes.data() + 16, 4);
  EXPECT_EQ(first, 1.0f);
}

TEST_F(CaptureIo, Iq32TruncatedPayloadReportsLengths) {
  const fs::path p = path("t.iq");
  save_capture(gen_ginibre(4, 4, 1), {p, CaptureFormat::Iq32, std::nullopt});
  std::string bytes = read_bytes(p);
  bytes.resize(bytes.size() - 5);
  write_bytes(p, bytes);
  try {
    load_capture({p, CaptureFormat::Iq32, std::nullopt});
    FAIL() << "expected a Format error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Format);
    const std::string message = e.what();
    EXPECT_NE(message.find("expected 128"), std::string::npos) << message;
    EXPECT_NE(message.find("got 123"), std::string::npos) << message;
  }
}

TEST_F(CaptureIo, Iq32HeaderErrors) {
  write_bytes(path("short.iq"), "RMTC");
  EXPECT_TRUE(throws_code([&] { load_capture({path("short.iq"), CaptureFormat::Iq32, std::nullopt}); }, ErrorCode::Format));
  std::string bad(16, '\0');
  bad.replace(0, 4, "XXXX");
  write_bytes(path("magic.iq"), bad);
  EXPECT_TRUE(throws_code([&] { load_capture({path("magic.iq"), CaptureFormat::Iq32, std::nullopt}); }, ErrorCode::Format));
  std::string reserved = "RMTC";
  reserved += std::string("\1\0\0\0\1\0\0\0\7\0\0\0", 12);
  reserved += std::string(8, '\0');
  write_bytes(path("reserved.iq"), reserved);
  EXPECT_TRUE(throws_code([&] { load_capture({path("reserved.iq"), CaptureFormat::Iq32, std::nullopt}); },
                          ErrorCode::Format));
  EXPECT_TRUE(throws_code([&] { load_capture({path("missing.iq"), CaptureFormat::Iq32, std::nullopt}); }, ErrorCode::Io));
}

TEST_F(CaptureIo, DeclaredDimsMustMatch) {
  save_capture(gen_ginibre(3, 5, 1), {path("d.iq"), CaptureFormat::Iq32, std::nullopt});
  CaptureFile file{path("d.iq"), CaptureFormat::Iq32, std::make_pair<std::size_t, std::size_t>(3, 6)};
  EXPECT_TRUE(throws_code([&] { load_capture(file); }, ErrorCode::Dimension));
  file.dims = std::make_pair<std::size_t, std::size_t>(3, 5);
  EXPECT_NO_THROW(load_capture(file));
  EXPECT_TRUE(throws_code([&] { save_capture(gen_ginibre(2, 2, 1), file); }, ErrorCode::Dimension));
}

TEST_F(CaptureIo, CsvRoundTripIsExact) {
  CMatrix m = gen_ginibre(4, 6, 9).data();
  m(0, 0) = Complex(-0.0, -1e-300);
  m(1, 1) = Complex(1e300, 3.0);
  const CaptureFile file{path("m.csv"), CaptureFormat::Csv, std::nullopt};
  save_capture(SnapshotMatrix(m), file);
  const SnapshotMatrix loaded = load_capture(file);
  EXPECT_TRUE(loaded.data() == m);
}

TEST_F(CaptureIo, CsvAcceptsLiteralAndPairLayouts) {
  write_bytes(path("lit.csv"), "1+2j, -0.5-1e-3j\n3, 2j\n");
  const SnapshotMatrix lit = load_capture({path("lit.csv"), CaptureFormat::Csv, std::nullopt});
  ASSERT_EQ(lit.rows(), 2u);
  ASSERT_EQ(lit.cols(), 2u);
  EXPECT_EQ(lit.data()(0, 0), Complex(1.0, 2.0));
  EXPECT_EQ(lit.data()(0, 1), Complex(-0.5, -1e-3));
  EXPECT_EQ(lit.data()(1, 0), Complex(3.0, 0.0));
  EXPECT_EQ(lit.data()(1, 1), Complex(0.0, 2.0));

  write_bytes(path("pairs.csv"), "1,2,3,4\n5,6,7,8\n");
  const SnapshotMatrix pairs = load_capture({path("pairs.csv"), CaptureFormat::Csv, std::nullopt});
  ASSERT_EQ(pairs.cols(), 2u);
  EXPECT_EQ(pairs.data()(1, 1), Complex(7.0, 8.0));
}

TEST_F(CaptureIo, CsvErrors) {
  write_bytes(path("ragged.csv"), "1+1j,2+2j\n3+3j\n");
  EXPECT_TRUE(throws_code([&] { load_capture({path("ragged.csv"), CaptureFormat::Csv, std::nullopt}); },
                          ErrorCode::Dimension));
  write_bytes(path("junk.csv"), "1+1j,abc\n");
  EXPECT_TRUE(throws_code([&] { load_capture({path("junk.csv"), CaptureFormat::Csv, std::nullopt}); }, ErrorCode::Format));
  write_bytes(path("odd.csv"), "1,2,3\n");
  EXPECT_TRUE(throws_code([&] { load_capture({path("odd.csv"), CaptureFormat::Csv, std::nullopt}); }, ErrorCode::Format));
  write_bytes(path("empty.csv"), "");
  EXPECT_TRUE(throws_code([&] { load_capture({path("empty.csv"), CaptureFormat::Csv, std::nullopt}); }, ErrorCode::Format));
}

TEST(ParseComplex, Forms) {
  EXPECT_EQ(parse_complex("1+2j"), Complex(1.0, 2.0));
  EXPECT_EQ(parse_complex("-0.5-1e-3j"), Complex(-0.5, -1e-3));
  EXPECT_EQ(parse_complex("3"), Complex(3.0, 0.0));
  EXPECT_EQ(parse_complex("2j"), Complex(0.0, 2.0));
  EXPECT_EQ(parse_complex("-j"), Complex(0.0, -1.0));
  EXPECT_EQ(parse_complex("1e-3+4.5e2j"), Complex(1e-3, 450.0));
  EXPECT_TRUE(throws_code([] { parse_complex(""); }, ErrorCode::Format));
  EXPECT_EQ(parse_complex("1+2i"), Complex(1.0, 2.0));
  EXPECT_TRUE(throws_code([] { parse_complex("1+2k"); }, ErrorCode::Format));
  EXPECT_TRUE(throws_code([] { parse_complex("abcj"); }, ErrorCode::Format));
}

TEST(CaptureFormat, FromExtension) {
  EXPECT_EQ(capture_format_for("x/y.csv"), CaptureFormat::Csv);
  EXPECT_EQ(capture_format_for("x/y.iq"), CaptureFormat::Iq32);
  EXPECT_EQ(capture_format_for("noext"), CaptureFormat::Iq32);
}

TEST(Figures, ScatterOutput) {
  const std::vector<Complex> points = {Complex(1.0, 0.0), Complex(-0.25, 3.5)};
  std::ostringstream out;
  write_figure(scatter_figure(points), out);
  EXPECT_EQ(out.str(), "re,im\n1,0\n-0.25,3.5\n");
}

TEST(Figures, NumbersRoundTrip) {
  std::ostringstream out;
  write_figure(FigureData{FigureKind::Curve, {{0.1, 1.0 / 3.0}}}, out);
  std::istringstream in(out.str());
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  EXPECT_EQ(header, "x,y");
  EXPECT_EQ(std::stod(line.substr(line.find(',') + 1)), 1.0 / 3.0);
}

TEST(Figures, HeadersAndRowWidth) {
  EXPECT_EQ(figure_header(FigureKind::Histogram), "bin_left,bin_right,density");
  EXPECT_EQ(figure_header(FigureKind::Series), "t,value");
  std::ostringstream out;
  write_figure(make_histogram({}), out);
  EXPECT_EQ(out.str(), "bin_left,bin_right,density\n");
  EXPECT_TRUE(throws_code([&] { write_figure(FigureData{FigureKind::Curve, {{1.0, 2.0, 3.0}}}, out); },
                          ErrorCode::InvalidArgument));
}

TEST(Figures, UnwritablePathIsIoError) {
  EXPECT_TRUE(throws_code([] { emit_figure(FigureData{}, "/nonexistent-dir/x.csv"); }, ErrorCode::Io));
}

TEST(Histogram, DensityIntegratesToOne) {
  std::mt19937_64 engine(1);
  std::gamma_distribution<double> gamma(2.0, 1.0);
  std::vector<double> x(5000);
  for (double& v : x) v = gamma(engine);
  for (std::size_t bins : {0u, 1u, 7u, 100u}) {
    const FigureData h = make_histogram(x, bins);
    if (bins != 0) EXPECT_EQ(h.rows.size(), bins);
    double mass = 0.0;
    for (const auto& row : h.rows) mass += row[2] * (row[1] - row[0]);
    EXPECT_NEAR(mass, 1.0, 1e-12) << "bins " << bins;
    EXPECT_EQ(h.rows.front()[0], *std::min_element(x.begin(), x.end()));
    EXPECT_EQ(h.rows.back()[1], *std::max_element(x.begin(), x.end()));
  }
}

TEST(Histogram, ConstantSampleAndNonFinite) {
  const std::vector<double> same(10, 2.0);
  const FigureData h = make_histogram(same, 4);
  EXPECT_DOUBLE_EQ(h.rows.front()[0], 1.5);
  EXPECT_DOUBLE_EQ(h.rows.back()[1], 2.5);
  const std::vector<double> bad = {1.0, std::nan("")};
  EXPECT_TRUE(throws_code([&] { make_histogram(bad); }, ErrorCode::InvalidArgument));
}

TEST(Histogram, FreedmanDiaconisBins) {
  std::vector<double> x;
  for (int i = 0; i < 1000; ++i) x.push_back(i / 999.0);
  // IQR 0.5, width 2 * 0.5 / 10 = 0.1 over a unit range.
  EXPECT_EQ(freedman_diaconis_bins(x), 10u);
  EXPECT_EQ(freedman_diaconis_bins(std::vector<double>{1.0}), 1u);
  EXPECT_EQ(freedman_diaconis_bins(std::vector<double>(5, 3.0)), 1u);
}

}  // namespace
}  // namespace rmtsense
