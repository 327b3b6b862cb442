#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "blochguide/errors.hpp"
#include "blochguide/pipeline.hpp"

using namespace blochguide;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("blochguide_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

RunConfig small_run() {
  return parse_config(R"({
    "geometry": {"eps": 1.0, "R": 14, "L": 2, "K": 14, "n1": 12, "n2": 12},
    "omega": 1.85,
    "source": {"kind": "incoming", "q": 3},
    "selection": {"j1_mesh": 41, "n_bands": 4},
    "band": {"mesh": 5, "n_bands": 2}
  })");
}

}  // namespace

TEST(Pipeline, BandOutputs) {
  const auto dir = scratch("band");
  const auto run = run_band(small_run(), dir);
  EXPECT_EQ(run.bands.size(), 2u * 5 * 5 * 2);
  EXPECT_FALSE(run.plus.empty());
  EXPECT_EQ(first_line(dir / "bands.csv"), "side,j1,j2,m,mu,P,vg1,vg2");
  EXPECT_EQ(first_line(dir / "selected.csv"), "side,j1,j2,m,mu,P,vg1,vg2");
}

TEST(Pipeline, SingleRowFamilyForUnitHeight) {
  auto c = small_run();
  c.geometry.K = 1;
  c.source.kind = SourceConfig::Kind::none;
  c.selection.j2_rows = 0;
  c.medium.right = Material::constant(1.0);
  const auto run = run_band(c, {});
  ASSERT_FALSE(run.plus.empty());
  for (const auto& e : run.plus.entries) EXPECT_EQ(e.j[1], 0.0);
  for (const auto& e : run.minus.entries) EXPECT_EQ(e.j[1], 0.0);
}

TEST(Pipeline, ZeroSourceZeroField) {
  auto c = small_run();
  c.source.kind = SourceConfig::Kind::none;
  const auto run = run_solve(c, {});
  EXPECT_EQ(run.field.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_FALSE(run.diagnostics.negative_refraction);
}

TEST(Pipeline, SolveOutputsAreReproducible) {
  const auto a = scratch("solve_a");
  const auto b = scratch("solve_b");
  const auto c = small_run();
  run_solve(c, a);
  run_solve(c, b);
  EXPECT_EQ(first_line(a / "field.csv"), "x1,x2,re_u,im_u,abs_u");
  for (const char* f : {"field.csv", "report.json"}) {
    const auto x = read_file(a / f);
    EXPECT_FALSE(x.empty());
    EXPECT_EQ(x, read_file(b / f)) << f;
  }
  EXPECT_TRUE(std::filesystem::exists(a / "timings.json"));
}

TEST(Pipeline, HomogeneousValidate) {
  auto c = small_run();
  c.a_star = 1.0;
  const auto run = run_validate(c, scratch("validate"));
  EXPECT_TRUE(run.a_star_from_config);
  EXPECT_NEAR(run.rt.R_ref, 0.0, 1e-14);
  EXPECT_LT(run.rt.err_R, 1e-2);
  EXPECT_LT(run.rt.err_T, 1e-2);
  EXPECT_NEAR(run.rt.snell_ratio, 1.0, 1e-2);
}

TEST(Pipeline, SweepRows) {
  auto c = small_run();
  c.a_star = 1.0;
  c.sweep_deltas = {1e-3};
  const auto dir = scratch("sweep");
  const auto run = run_sweep(c, dir);
  ASSERT_EQ(run.rows.size(), 1u);
  EXPECT_LT(run.rows[0].rt.err_R, 1e-2);
  EXPECT_EQ(first_line(dir / "sweep.csv"), "delta,err_R,err_T");
}

TEST(Pipeline, ValidateNeedsIncomingWave) {
  auto c = small_run();
  c.source.kind = SourceConfig::Kind::gaussian;
  c.a_star = 0.5;
  EXPECT_THROW(run_validate(c, {}), ConfigError);
}
