#include "inexact/serialize.hpp"

#include <filesystem>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "inexact/errors.hpp"
#include "inexact/gm.hpp"
#include "inexact/rng.hpp"
#include "inexact/trace_io.hpp"

namespace inexact {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("inexact_test_" + name);
  fs::remove_all(dir);
  return dir;
}

TEST(Blob, LittleEndianRowMajor) {
  const Matrix m{{1.0, 2.0}, {-0.5, 0.0}};
  const std::string bytes = encode_matrix(m);
  ASSERT_EQ(bytes.size(), 32u);
  // 1.0 = 0x3ff0000000000000, least significant byte first.
  EXPECT_EQ(bytes.substr(0, 8), std::string("\x00\x00\x00\x00\x00\x00\xf0\x3f", 8));
  // Second value in memory is m(0, 1) = 2.0 = 0x4000000000000000.
  EXPECT_EQ(bytes.substr(8, 8), std::string("\x00\x00\x00\x00\x00\x00\x00\x40", 8));
  EXPECT_EQ(decode_matrix(bytes, 2, 2), m);
}

TEST(Blob, RoundTripsSpecialValues) {
  const Matrix m{{std::numeric_limits<double>::infinity(), -0.0, 5e-324}};
  const Matrix back = decode_matrix(encode_matrix(m), 1, 3);
  EXPECT_EQ(back(0, 0), m(0, 0));
  EXPECT_TRUE(std::signbit(back(0, 1)));
  EXPECT_EQ(back(0, 2), 5e-324);
}

TEST(Blob, ShapeMismatchRejected) {
  try {
    decode_matrix(std::string(16, '\0'), 3, 1);
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(Manifest, DescribesGeneratorAndBlobs) {
  const auto inst = make_covering_circle(3, 2, 4, 9);
  const auto j = instance_manifest(inst);
  EXPECT_EQ(j["name"], "covering_circle");
  EXPECT_EQ(j["seed"], 9);
  EXPECT_EQ(j["generator"]["version"], Rng::kVersion);
  EXPECT_EQ(j["params"]["N"], 4.0);
  ASSERT_EQ(j["blobs"].size(), 2u);
  for (const auto& b : j["blobs"]) {
    EXPECT_EQ(b["dtype"], "float64-le");
    EXPECT_EQ(b["order"], "row-major");
  }
}

TEST(Manifest, WriteAndReadBack) {
  const auto inst = make_quartic_relative(5, 3);
  const auto dir = scratch_dir("manifest");
  write_instance(inst, dir);
  std::ifstream in(dir / "manifest.json");
  const auto j = nlohmann::json::parse(in);
  for (const auto& b : j["blobs"]) {
    const Matrix m = read_blob(dir / b["file"].get<std::string>(), b["rows"], b["cols"]);
    EXPECT_EQ(m, inst.data.at(b["name"].get<std::string>()));
  }
  fs::remove_all(dir);
}

TEST(TraceIo, ShortestRoundTripText) {
  EXPECT_EQ(format_real(0.1), "0.1");
  EXPECT_EQ(format_real(400.0), "400");
  EXPECT_EQ(format_real(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_real(-std::numeric_limits<double>::infinity()), "-inf");
  const double x = 1.0 / 3.0;
  EXPECT_EQ(std::stod(format_real(x)), x);
}

TEST(TraceIo, GradientTraceColumns) {
  const auto model = model_from_gradient([](const Point& x) { return 0.5 * x.squaredNorm(); },
                                         [](const Point& x) -> Vector { return x; });
  GMConfig cfg;
  cfg.max_iterations = 3;
  cfg.divergence_bound = 1.0;
  const auto run = gm_solve(model, *euclidean_setup(), FeasibleSet::unit_ball(2), Vector{{0.6, 0.0}}, cfg);
  std::ostringstream out;
  write_trace(run, out);
  const std::string text = out.str();
  std::istringstream lines(text);
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  EXPECT_EQ(header, "k,f_delta,L_k,V_to_ref,bound_rhs,cumulative_model_evals");
  EXPECT_EQ(first.substr(0, 2), "1,");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}

TEST(TraceIo, MirrorProxTraceHasGapOnLastRow) {
  MPRun run;
  run.L_history = {1.0, 2.0};
  run.S_history = {1.0, 1.5};
  run.wallclock_ns = {0, 0};
  run.gap_estimate = 0.25;
  std::ostringstream out;
  write_trace(run, out);
  EXPECT_EQ(out.str(), "k,L_k,S_k,gap_estimate,wallclock_ns\n1,1,1,,0\n2,2,1.5,0.25,0\n");
}

TEST(TraceIo, UnwritablePath) {
  const auto dir = scratch_dir("unwritable");
  write_text_file(dir / "file", "x");
  try {
    write_text_file(dir / "file" / "child.csv", "y");
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutputUnwritable);
  }
  fs::remove_all(dir);
}

}  // namespace
}  // namespace inexact
