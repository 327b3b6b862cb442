#include "blochguide/medium.hpp"

#include <algorithm>
#include <cmath>

#include "blochguide/errors.hpp"

namespace blochguide {

namespace {

// Sub-samples per triangle edge for cell averaging: m² equal-area sub-triangles.
constexpr int kAverageLevels = 16;

double wrap_unit(double s) {
  s -= std::floor(s);
  return s >= 1.0 ? 0.0 : s;
}

}  // namespace

Material Material::constant(double a) {
  Material m;
  m.kind = Kind::constant;
  m.value = a;
  return m;
}

Material Material::disc_array(double inside_value, double radius, double background) {
  Material m;
  m.kind = Kind::discs;
  m.value = background;
  m.inside_value = inside_value;
  m.radius = radius;
  m.centers = {{0.5, 0.0}, {0.0, 0.5}, {0.5, 1.0}, {1.0, 0.5}};
  return m;
}

Material Material::laminate(std::vector<double> breaks, std::vector<double> values) {
  Material m;
  m.kind = Kind::laminate;
  m.breaks = std::move(breaks);
  m.layer_values = std::move(values);
  return m;
}

double Material::operator()(double s1, double s2) const {
  switch (kind) {
    case Kind::constant:
      return value;
    case Kind::discs: {
      s1 = wrap_unit(s1);
      s2 = wrap_unit(s2);
      for (const auto& c : centers) {
        if (std::hypot(s1 - c[0], s2 - c[1]) < radius) return inside_value;
      }
      return value;
    }
    case Kind::laminate: {
      s1 = wrap_unit(s1);
      for (std::size_t k = 0; k < breaks.size(); ++k) {
        if (s1 < breaks[k]) return layer_values[k];
      }
      return layer_values.back();
    }
  }
  return value;
}

void Material::validate() const {
  switch (kind) {
    case Kind::constant:
      if (!(value > 0.0)) throw ConfigError("medium: constant value must be positive");
      break;
    case Kind::discs:
      if (!(value > 0.0) || !(inside_value > 0.0)) {
        throw ConfigError("medium: disc array values must be positive");
      }
      if (!(radius >= 0.0)) throw ConfigError("medium: disc radius must be non-negative");
      break;
    case Kind::laminate:
      if (layer_values.size() != breaks.size() + 1) {
        throw ConfigError("medium: laminate needs one more value than breaks");
      }
      if (!std::is_sorted(breaks.begin(), breaks.end())) {
        throw ConfigError("medium: laminate breaks must be ascending");
      }
      for (double v : layer_values) {
        if (!(v > 0.0)) throw ConfigError("medium: laminate values must be positive");
      }
      break;
  }
}

const Material& Medium::for_cell_column(int cell_column) const {
  if (cell_column < 0) return left;
  if (slab && cell_column < slab_cells) return *slab;
  return right;
}

double Medium::value(double x1, double x2, double eps) const {
  const int column = static_cast<int>(std::floor(x1 / eps));
  return for_cell_column(column)(x1 / eps, x2 / eps);
}

void Medium::validate() const {
  left.validate();
  right.validate();
  if (slab) {
    slab->validate();
    if (slab_cells < 1) throw ConfigError("medium: slab width must be >= 1 cell");
  }
}

std::vector<double> local_element_coefficients(const Material& material, int n1, int n2,
                                               CoefficientSampling mode) {
  std::vector<double> out(static_cast<std::size_t>(2 * n1 * n2));
  const double h1 = 1.0 / n1;
  const double h2 = 1.0 / n2;
  for (int i = 0; i < n1; ++i) {
    for (int k = 0; k < n2; ++k) {
      for (int type = 0; type < 2; ++type) {
        const auto off = vertex_offsets(type);
        std::array<std::array<double, 2>, 3> p{};
        for (int v = 0; v < 3; ++v) p[v] = {(i + off[v][0]) * h1, (k + off[v][1]) * h2};
        double a = 0.0;
        if (material.is_constant()) {
          a = material.value;
        } else if (mode == CoefficientSampling::grid_node) {
          a = material(i * h1, k * h2);
        } else if (mode == CoefficientSampling::barycenter) {
          a = material((p[0][0] + p[1][0] + p[2][0]) / 3.0, (p[0][1] + p[1][1] + p[2][1]) / 3.0);
        } else {
          // centroids of the m² congruent sub-triangles
          const int m = kAverageLevels;
          double sum = 0.0;
          auto at = [&](double l1, double l2) {
            const double s1 = p[0][0] + l1 * (p[1][0] - p[0][0]) + l2 * (p[2][0] - p[0][0]);
            const double s2 = p[0][1] + l1 * (p[1][1] - p[0][1]) + l2 * (p[2][1] - p[0][1]);
            sum += material(s1, s2);
          };
          for (int r = 0; r < m; ++r) {
            for (int q = 0; q + r < m; ++q) at((r + 1.0 / 3.0) / m, (q + 1.0 / 3.0) / m);
            for (int q = 0; q + r < m - 1; ++q) at((r + 2.0 / 3.0) / m, (q + 2.0 / 3.0) / m);
          }
          a = sum / (m * m);
        }
        out[local_element_index(i, k, type, n2)] = a;
      }
    }
  }
  return out;
}

std::vector<double> sample_coefficient(const Medium& medium, const Grid& grid,
                                       CoefficientSampling mode) {
  medium.validate();
  const auto& spec = grid.spec();
  const auto left = local_element_coefficients(medium.left, spec.n1, spec.n2, mode);
  const auto right = local_element_coefficients(medium.right, spec.n1, spec.n2, mode);
  std::vector<double> slab;
  if (medium.slab) slab = local_element_coefficients(*medium.slab, spec.n1, spec.n2, mode);

  std::vector<double> out;
  out.reserve(grid.elements().size());
  for (const auto& e : grid.elements()) {
    const std::vector<double>* table = &right;
    if (e.cell_column < 0) {
      table = &left;
    } else if (medium.slab && e.cell_column < medium.slab_cells) {
      table = &slab;
    }
    out.push_back((*table)[e.local]);
  }
  return out;
}

}  // namespace blochguide
