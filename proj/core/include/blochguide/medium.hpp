#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "blochguide/grid.hpp"

namespace blochguide {

// One ε-periodic coefficient a(x) on the reference cell [0,1)² (cell units).
struct Material {
  enum class Kind { constant, discs, laminate };

  Kind kind = Kind::constant;
  double value = 1.0;  // constant value, or background for discs

  // discs: a = inside_value where the distance to any center is < radius
  double inside_value = 1.0;
  double radius = 0.35 / std::numbers::sqrt2;
  std::vector<std::array<double, 2>> centers;

  // laminate in x₁: layer k spans [breaks[k-1], breaks[k]) with breaks[-1] = 0, last = 1
  std::vector<double> breaks;
  std::vector<double> layer_values;

  static Material constant(double a);
  // Disc array with centers at the four edge midpoints of the cell.
  static Material disc_array(double inside_value, double radius, double background = 1.0);
  static Material laminate(std::vector<double> breaks, std::vector<double> values);

  bool is_constant() const { return kind == Kind::constant; }
  // Point evaluation at reference-cell coordinates, wrapped into [0,1)².
  double operator()(double s1, double s2) const;
  void validate() const;
};

// Square lattice of period 1/√2 rotated by 45°: holes of radius 0.35·period, a = 1 inside,
// a = 1/12 in the background.
inline constexpr double kCrystalRadius = 0.35 / std::numbers::sqrt2;
inline constexpr double kCrystalBackground = 1.0 / 12.0;

inline Material hole_crystal() { return Material::disc_array(1.0, kCrystalRadius, kCrystalBackground); }

// Piecewise layout in x₁: left material for x₁ < 0; right material for x₁ ≥ 0, except an
// optional slab of slab_cells periods starting at x₁ = 0 that uses the slab material.
struct Medium {
  Material left = Material::constant(1.0);
  Material right = hole_crystal();
  std::optional<Material> slab;
  int slab_cells = 0;

  const Material& for_cell_column(int cell_column) const;
  const Material& for_side(Side s) const { return s == Side::plus ? right : left; }
  double value(double x1, double x2, double eps) const;
  void validate() const;
};

// barycenter: value at the triangle centroid; cell_average: mean over the triangle;
// grid_node: value at the lower-left grid point of the enclosing grid square.
enum class CoefficientSampling { barycenter, cell_average, grid_node };

// Element-wise constant coefficient on one n1 × n2 cell, indexed by local_element_index.
std::vector<double> local_element_coefficients(const Material& material, int n1, int n2,
                                               CoefficientSampling mode);

// One coefficient per grid element. Translates of a cell element get bitwise equal values.
std::vector<double> sample_coefficient(const Medium& medium, const Grid& grid,
                                       CoefficientSampling mode = CoefficientSampling::grid_node);

}  // namespace blochguide
