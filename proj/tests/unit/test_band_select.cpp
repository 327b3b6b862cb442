#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "blochguide/band_select.hpp"
#include "blochguide/errors.hpp"
#include "support.hpp"

using namespace blochguide;
using testing_support::kPi;
using testing_support::p1_symbol;

namespace {

// Root j₁ of sign `sign` of the discrete a = 1 dispersion λ(j₁, j₂) = ω² on an m × m cell.
// The mesh diagonal makes λ(−j₁, j₂) ≠ λ(j₁, j₂).
double discrete_circle(double omega, double j2, int m, double sign) {
  const double h = 1.0 / m;
  auto f = [&](double j1) { return p1_symbol(2 * kPi * j1 / m, 2 * kPi * j2 / m, h, h) - omega * omega; };
  double lo = 0.0, hi = 0.5 * sign;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(lo) * f(mid) <= 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

SelectionOptions fast_options() {
  SelectionOptions o;
  o.j1_mesh = 41;
  o.n_bands = 4;
  return o;
}

}  // namespace

TEST(QPrime, Values) {
  EXPECT_EQ(q_prime(4), (std::vector<double>{-0.25, 0.0, 0.25, 0.5}));
  const auto q3 = q_prime(3);
  ASSERT_EQ(q3.size(), 3u);
  EXPECT_DOUBLE_EQ(q3[0], -1.0 / 3);
  EXPECT_DOUBLE_EQ(q3[1], 0.0);
  EXPECT_DOUBLE_EQ(q3[2], 1.0 / 3);
  EXPECT_EQ(q_prime(1), std::vector<double>{0.0});
  EXPECT_THROW(q_prime(0), ConfigError);
}

TEST(QPrime, NearestRowIsPeriodic) {
  const auto q = q_prime(4);
  EXPECT_EQ(q[nearest_q_row(0.24, 4)], 0.25);
  EXPECT_EQ(q[nearest_q_row(-0.49, 4)], 0.5);
  EXPECT_EQ(q[nearest_q_row(0.01, 4)], 0.0);
}

TEST(IncomingAdmissible, ExactVectors) {
  const Vec2 small = incoming_wave_vector(0.2 * kPi, 1, 14, 1.0);
  const Vec2 large = incoming_wave_vector(1.85, 3, 14, 1.0);
  EXPECT_TRUE(incoming_admissible(0.2 * kPi, small));
  EXPECT_TRUE(incoming_admissible(1.85, large));
  EXPECT_NEAR(small[0], 0.440, 5e-4);
  EXPECT_NEAR(small[1], 0.449, 5e-4);
  EXPECT_NEAR(large[0], 1.269, 5e-4);
  EXPECT_NEAR(large[1], 1.346, 5e-4);
  EXPECT_FALSE(incoming_admissible(1.0, {1.0, 1.0}));
}

TEST(IncomingAdmissible, ThreeDecimalVectorsMissTheThreshold) {
  // rounding to three decimals moves |j|² by ~4e-4, far outside 1e-6·ω²
  EXPECT_NEAR(std::hypot(0.440, 0.449), 0.2 * kPi, 1e-3);
  EXPECT_NEAR(std::hypot(1.269, 1.346), 1.85, 1e-3);
  EXPECT_FALSE(incoming_admissible(0.2 * kPi, {0.440, 0.449}));
  EXPECT_FALSE(incoming_admissible(1.85, {1.269, 1.346}));
}

TEST(IncomingWaveVector, EvanescentRowThrows) {
  EXPECT_THROW(incoming_wave_vector(0.5, 3, 14, 1.0), ConfigError);
}

TEST(SelectionOptions, Validation) {
  SelectionOptions o;
  EXPECT_NO_THROW(o.validate());
  o.j1_mesh = 2;
  EXPECT_THROW(o.validate(), ConfigError);
  o = {};
  o.level_tol_rel = -1;
  EXPECT_THROW(o.validate(), ConfigError);
}

TEST(SelectIndices, HomogeneousCircle) {
  const int m = 8, K = 14;
  const double omega = 0.2 * kPi;
  CellProblem cell(CellGrid{1.0, m, m}, Material::constant(1.0));
  auto opt = fast_options();
  opt.j2_rows = 1;
  opt.target_j2 = 1.0 / K;
  const auto plus = select_indices(cell, omega, Side::plus, K, opt);
  const auto minus = select_indices(cell, omega, Side::minus, K, opt);
  ASSERT_EQ(plus.size(), 1u);
  ASSERT_EQ(minus.size(), 1u);
  EXPECT_NEAR(plus.entries[0].j[0], discrete_circle(omega, 1.0 / K, m, 1.0), 1e-6);
  EXPECT_NEAR(minus.entries[0].j[0], discrete_circle(omega, 1.0 / K, m, -1.0), 1e-6);
  EXPECT_DOUBLE_EQ(plus.entries[0].j[1], 1.0 / K);
  // analytic circle, up to the O(h²) discretization error
  const double analytic = std::sqrt(std::pow(omega / (2 * kPi), 2) - 1.0 / (K * K));
  EXPECT_NEAR(plus.entries[0].j[0], analytic, 5e-3);
}

TEST(SelectIndices, ThresholdAndLevelSetInvariants) {
  CellProblem cell(CellGrid{1.0, 8, 8}, hole_crystal());
  const double omega = 1.85;
  const auto opt = fast_options();
  for (Side side : {Side::plus, Side::minus}) {
    const auto set = select_indices(cell, omega, side, 4, opt);
    ASSERT_FALSE(set.empty());
    EXPECT_NEAR(set.level_tol, 1e-6 * omega * omega, 1e-18);
    for (const auto& e : set.entries) {
      EXPECT_GT(side == Side::plus ? e.P : -e.P, set.c0);
      EXPECT_LT(std::abs(cell.eigenvalues(e.j, opt.n_bands)[e.m] - omega * omega), set.level_tol);
      EXPECT_EQ(e.vg[0] > 0, side == Side::plus);
      bool on_row = false;
      for (double q : q_prime(4)) on_row = on_row || q == e.j[1];
      EXPECT_TRUE(on_row);
    }
  }
}

TEST(SelectIndices, RowAndModeCaps) {
  CellProblem cell(CellGrid{1.0, 8, 8}, hole_crystal());
  auto opt = fast_options();
  const auto all = select_indices(cell, 1.85, Side::plus, 4, opt);
  opt.max_modes = 1;
  const auto capped = select_indices(cell, 1.85, Side::plus, 4, opt);
  ASSERT_EQ(capped.size(), 1u);
  double closest = 1.0;
  for (const auto& e : all.entries) closest = std::min(closest, std::abs(e.j[1]));
  EXPECT_EQ(std::abs(capped.entries[0].j[1]), closest);
}

TEST(SelectIndices, EvanescentRowGivesEmptySet) {
  CellProblem cell(CellGrid{1.0, 8, 8}, Material::constant(1.0));
  auto opt = fast_options();
  opt.j2_rows = 1;
  opt.target_j2 = 0.25;
  EXPECT_TRUE(select_indices(cell, 0.5, Side::plus, 4, opt).empty());
}

TEST(SelectIndices, Deterministic) {
  CellProblem cell(CellGrid{1.0, 8, 8}, hole_crystal());
  const auto a = select_indices(cell, 1.85, Side::minus, 4, fast_options());
  const auto b = select_indices(cell, 1.85, Side::minus, 4, fast_options());
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.entries[i].j, b.entries[i].j);
    EXPECT_EQ(a.entries[i].mode.psi, b.entries[i].mode.psi);
  }
}
