#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace blochguide {

// Radiation box selector: + is the right box W⁺, − the left box W⁻.
enum class Side : std::uint8_t { plus, minus };

inline const char* side_name(Side s) { return s == Side::plus ? "+" : "-"; }

// Uniform geometry of the truncated wave-guide Ω_{R+L} = (−ε(R+L), ε(R+L)) × (0, εK).
// Lengths R, L, K are counted in periodicity cells; n1, n2 subdivide one cell.
struct GridSpec {
  double eps = 1.0;
  int R = 15;
  int L = 6;
  int K = 14;
  int n1 = 20;
  int n2 = 19;

  double h1() const { return eps / n1; }
  double h2() const { return eps / n2; }
  double height() const { return eps * K; }

  // Throws ConfigError when any dimension is non-positive.
  void validate() const;
};

enum class Region : std::uint8_t { interior, box_plus, box_minus };

// Right triangle inside one grid rectangle [ix, ix+1] × [iy, iy+1] (grid indices).
//   type 0: (ix,iy), (ix+1,iy), (ix+1,iy+1)   right angle at (ix+1,iy)
//   type 1: (ix,iy), (ix+1,iy+1), (ix,iy+1)   right angle at (ix,iy+1)
struct Element {
  std::array<int, 3> nodes{};
  int ix = 0;
  int iy = 0;
  int type = 0;
  int cell_column = 0;  // element lies in x₁ ∈ [cell_column·ε, (cell_column+1)·ε)
  int local = 0;        // index within its periodicity cell, shared by all ε-translates
  Region region = Region::interior;
};

// Index of an element inside one periodicity cell with n1 × n2 subdivisions.
inline int local_element_index(int i, int k, int type, int n2) { return (i * n2 + k) * 2 + type; }

struct LocalMatrices {
  Eigen::Matrix3d stiffness;  // a ∫ ∇φ_i·∇φ_j
  Eigen::Matrix3d mass;       // ∫ φ_i φ_j
  Eigen::Matrix3d flux;       // ∫ φ_i ∂₁φ_j
};

// Gradients of the three hat functions on a triangle of the given type, rows = vertex.
std::array<std::array<double, 2>, 3> hat_gradients(int type, double h1, double h2);

// Closed-form P1 element matrices for constant coefficient a_value.
LocalMatrices element_matrices(int type, double h1, double h2, double a_value);

// Offsets (in grid steps) of the three vertices of a triangle type.
inline std::array<std::array<int, 2>, 3> vertex_offsets(int type) {
  if (type == 0) return {{{0, 0}, {1, 0}, {1, 1}}};
  return {{{0, 0}, {1, 1}, {0, 1}}};
}

// Vertically periodic right-triangle mesh of Ω_{R+L} with region-ordered nodes:
// [0, N₀) interior (−εR, εR) × [0, εK), then N_W nodes of the closed box W⁺, then N_W of W⁻.
class Grid {
 public:
  explicit Grid(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }

  int num_nodes() const { return static_cast<int>(node_ix_.size()); }
  int num_interior() const { return n_interior_; }
  int num_box() const { return n_box_; }
  int num_columns() const { return n_columns_; }  // node columns, 2(R+L)n1 + 1
  int num_rows() const { return n_rows_; }        // node rows, K n2 (x₂ = εK wraps to 0)

  // Region-ordered node index of grid point (ix, iy); iy is taken modulo num_rows().
  int node(int ix, int iy) const;
  std::pair<int, int> grid_index(int node) const { return {node_ix_[node], node_iy_[node]}; }

  double x1(int ix) const { return (ix - (spec_.R + spec_.L) * spec_.n1) * spec_.h1(); }
  double x2(int iy) const { return iy * spec_.h2(); }
  std::array<double, 2> coords(int node) const { return {x1(node_ix_[node]), x2(node_iy_[node])}; }

  // First node index and first grid column of a closed radiation box.
  int box_offset(Side s) const { return s == Side::plus ? n_interior_ : n_interior_ + n_box_; }
  int box_first_column(Side s) const;
  int box_columns() const { return spec_.L * spec_.n1 + 1; }

  const std::vector<Element>& elements() const { return elements_; }

 private:
  GridSpec spec_;
  int n_columns_ = 0;
  int n_rows_ = 0;
  int n_interior_ = 0;
  int n_box_ = 0;
  std::vector<int> node_ix_;
  std::vector<int> node_iy_;
  std::vector<int> node_of_;  // (ix * n_rows + iy) -> node
  std::vector<Element> elements_;
};

Grid build_grid(const GridSpec& spec);

}  // namespace blochguide
