#include "blochguide/grid.hpp"

#include <string>

#include "blochguide/errors.hpp"

namespace blochguide {

void GridSpec::validate() const {
  if (!(eps > 0.0)) throw ConfigError("grid: eps must be positive");
  if (R < 1 || L < 1 || K < 1) {
    throw ConfigError("grid: R, L, K must be >= 1 (got R=" + std::to_string(R) +
                      ", L=" + std::to_string(L) + ", K=" + std::to_string(K) + ")");
  }
  if (n1 < 1 || n2 < 1) throw ConfigError("grid: n1, n2 must be >= 1");
}

std::array<std::array<double, 2>, 3> hat_gradients(int type, double h1, double h2) {
  if (type == 0) return {{{-1.0 / h1, 0.0}, {1.0 / h1, -1.0 / h2}, {0.0, 1.0 / h2}}};
  return {{{0.0, -1.0 / h2}, {1.0 / h1, 0.0}, {-1.0 / h1, 1.0 / h2}}};
}

LocalMatrices element_matrices(int type, double h1, double h2, double a_value) {
  const double area = 0.5 * h1 * h2;
  const auto g = hat_gradients(type, h1, h2);
  LocalMatrices out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      out.stiffness(i, j) = a_value * area * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
      out.mass(i, j) = area / 12.0 * (i == j ? 2.0 : 1.0);
      out.flux(i, j) = area / 3.0 * g[j][0];
    }
  }
  return out;
}

Grid::Grid(const GridSpec& spec) : spec_(spec) {
  spec_.validate();
  const int n1 = spec_.n1;
  const int n2 = spec_.n2;
  const int half = (spec_.R + spec_.L) * n1;  // column of x₁ = 0
  n_columns_ = 2 * half + 1;
  n_rows_ = spec_.K * n2;

  const int minus_last = spec_.L * n1;              // W⁻ closed: ix ∈ [0, L n1]
  const int plus_first = (2 * spec_.R + spec_.L) * n1;  // W⁺ closed: ix ∈ [(2R+L) n1, 2(R+L) n1]
  n_interior_ = (plus_first - minus_last - 1) * n_rows_;
  n_box_ = (spec_.L * n1 + 1) * n_rows_;

  const auto total = static_cast<std::size_t>(n_columns_) * n_rows_;
  node_of_.assign(total, -1);
  node_ix_.resize(total);
  node_iy_.resize(total);
  int next_interior = 0;
  int next_plus = n_interior_;
  int next_minus = n_interior_ + n_box_;
  for (int ix = 0; ix < n_columns_; ++ix) {
    for (int iy = 0; iy < n_rows_; ++iy) {
      int id = 0;
      if (ix <= minus_last) {
        id = next_minus++;
      } else if (ix >= plus_first) {
        id = next_plus++;
      } else {
        id = next_interior++;
      }
      node_of_[static_cast<std::size_t>(ix) * n_rows_ + iy] = id;
      node_ix_[id] = ix;
      node_iy_[id] = iy;
    }
  }

  elements_.reserve(static_cast<std::size_t>(n_columns_ - 1) * n_rows_ * 2);
  for (int ix = 0; ix + 1 < n_columns_; ++ix) {
    const int cell_column = (ix - half >= 0) ? (ix - half) / n1 : -((half - ix - 1) / n1) - 1;
    const int li = ix - (cell_column * n1 + half);
    Region region = Region::interior;
    if (ix < minus_last) region = Region::box_minus;
    if (ix >= plus_first) region = Region::box_plus;
    for (int iy = 0; iy < n_rows_; ++iy) {
      for (int type = 0; type < 2; ++type) {
        Element e;
        const auto off = vertex_offsets(type);
        for (int v = 0; v < 3; ++v) e.nodes[v] = node(ix + off[v][0], iy + off[v][1]);
        e.ix = ix;
        e.iy = iy;
        e.type = type;
        e.cell_column = cell_column;
        e.local = local_element_index(li, iy % n2, type, n2);
        e.region = region;
        elements_.push_back(e);
      }
    }
  }
}

int Grid::node(int ix, int iy) const {
  iy %= n_rows_;
  if (iy < 0) iy += n_rows_;
  return node_of_[static_cast<std::size_t>(ix) * n_rows_ + iy];
}

int Grid::box_first_column(Side s) const {
  return s == Side::plus ? (2 * spec_.R + spec_.L) * spec_.n1 : 0;
}

Grid build_grid(const GridSpec& spec) { return Grid(spec); }

}  // namespace blochguide
