#include <gtest/gtest.h>

#include <algorithm>

#include "blochguide/errors.hpp"
#include "blochguide/medium.hpp"
#include "support.hpp"

using namespace blochguide;

TEST(Material, Constant) {
  const auto a = local_element_coefficients(Material::constant(1.0), 4, 5, CoefficientSampling::barycenter);
  EXPECT_EQ(a.size(), 40u);
  EXPECT_TRUE(std::all_of(a.begin(), a.end(), [](double v) { return v == 1.0; }));
}

TEST(Material, PrintedFormulaPointValues) {
  const auto m = Material::disc_array(1.0 / 12.0, kCrystalRadius, 1.0);
  EXPECT_DOUBLE_EQ(m(0.5, 0.0), 1.0 / 12.0);
  EXPECT_NEAR(std::hypot(0.25, 0.25), 0.354, 1e-3);
  EXPECT_NEAR(kCrystalRadius, 0.2475, 1e-4);
  EXPECT_DOUBLE_EQ(m(0.25, 0.25), 1.0);
}

TEST(Material, HoleCrystalPointValues) {
  const auto m = hole_crystal();
  EXPECT_DOUBLE_EQ(m(0.5, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(m(0.0, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(m(0.25, 0.25), kCrystalBackground);
  EXPECT_DOUBLE_EQ(m(1.5, -1.0), m(0.5, 0.0));
}

TEST(Material, Laminate) {
  const auto m = Material::laminate({0.5}, {1.0, 0.25});
  EXPECT_DOUBLE_EQ(m(0.2, 0.7), 1.0);
  EXPECT_DOUBLE_EQ(m(0.7, 0.1), 0.25);
}

TEST(Material, ValidationRejectsNonPositive) {
  EXPECT_THROW(Material::constant(0.0).validate(), ConfigError);
  EXPECT_THROW(Material::disc_array(-1.0, 0.2).validate(), ConfigError);
  EXPECT_THROW(Material::laminate({0.5}, {1.0}).validate(), ConfigError);
}

TEST(Material, GridNodeSampling) {
  const auto m = hole_crystal();
  const int n1 = 20, n2 = 19;
  const auto a = local_element_coefficients(m, n1, n2, CoefficientSampling::grid_node);
  for (int i = 0; i < n1; ++i) {
    for (int k = 0; k < n2; ++k) {
      const double v = m(double(i) / n1, double(k) / n2);
      EXPECT_EQ(a[local_element_index(i, k, 0, n2)], v);
      EXPECT_EQ(a[local_element_index(i, k, 1, n2)], v);
    }
  }
}

TEST(Material, CellAverageBetweenExtremes) {
  const auto a = local_element_coefficients(hole_crystal(), 10, 10, CoefficientSampling::cell_average);
  for (double v : a) {
    EXPECT_GE(v, kCrystalBackground - 1e-15);
    EXPECT_LE(v, 1.0 + 1e-15);
  }
}

TEST(Medium, SlabLayout) {
  Medium m;
  m.slab = hole_crystal();
  m.slab_cells = 3;
  m.right = Material::constant(0.5);
  EXPECT_EQ(m.for_cell_column(-1).kind, Material::Kind::constant);
  EXPECT_EQ(m.for_cell_column(0).kind, Material::Kind::discs);
  EXPECT_EQ(m.for_cell_column(2).kind, Material::Kind::discs);
  EXPECT_DOUBLE_EQ(m.for_cell_column(3).value, 0.5);
}
