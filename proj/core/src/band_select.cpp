#include "blochguide/band_select.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <spdlog/spdlog.h>

#include "blochguide/errors.hpp"

namespace blochguide {

namespace {

double wrap_zone(double t) {
  t -= std::ceil(t - 0.5);  // into (−½, ½]
  return t;
}

double periodic_distance(double a, double b) { return std::abs(wrap_zone(a - b)); }

struct Root {
  double j1;
  int m;
};

}  // namespace

std::vector<double> q_prime(int K) {
  if (K < 1) throw ConfigError("q_prime: K must be >= 1");
  const int first = (K % 2 == 0) ? -(K - 2) / 2 : -(K - 1) / 2;
  std::vector<double> out(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) out[i] = static_cast<double>(first + i) / K;
  return out;
}

int nearest_q_row(double j2, int K) {
  const auto rows = q_prime(K);
  int best = 0;
  for (int i = 1; i < K; ++i) {
    if (periodic_distance(rows[i], j2) < periodic_distance(rows[best], j2) - 1e-14) best = i;
  }
  return best;
}

void SelectionOptions::validate() const {
  if (j1_mesh < 16) throw ConfigError("selection: j1_mesh must be >= 16");
  if (n_bands < 1) throw ConfigError("selection: n_bands must be >= 1");
  if (!(level_tol_rel > 0.0)) throw ConfigError("selection: level_tol must be positive");
  if (!(c0_rel >= 0.0) || (c0 && !(*c0 >= 0.0))) throw ConfigError("selection: c0 must be >= 0");
  if (j2_rows < 0 || max_modes < 0) throw ConfigError("selection: counts must be >= 0");
  if (max_iterations < 1) throw ConfigError("selection: max_iterations must be >= 1");
  if (!(dj > 0.0)) throw ConfigError("selection: dj must be positive");
}

IndexSet select_indices(const CellProblem& cell, double omega, Side side, int K,
                        const SelectionOptions& opt) {
  opt.validate();
  if (!(omega > 0.0)) throw ConfigError("selection: omega must be positive");
  const double w2 = omega * omega;
  const double level_tol = opt.level_tol_rel * w2;
  const int n = opt.j1_mesh;
  const int nb = std::min(opt.n_bands, cell.grid().num_nodes());

  std::vector<double> rows = q_prime(K);
  if (opt.j2_rows > 0 && opt.j2_rows < K) {
    std::stable_sort(rows.begin(), rows.end(), [&](double a, double b) {
      return periodic_distance(a, opt.target_j2) < periodic_distance(b, opt.target_j2) - 1e-14;
    });
    rows.resize(static_cast<std::size_t>(opt.j2_rows));
    std::sort(rows.begin(), rows.end());
  }

  std::vector<IndexEntry> candidates;
  for (double j2 : rows) {
    std::vector<Eigen::VectorXd> mesh(static_cast<std::size_t>(n));
    auto j1_at = [n](int i) { return -0.5 + static_cast<double>(i + 1) / n; };
    for (int i = 0; i < n; ++i) mesh[i] = cell.eigenvalues({j1_at(i), j2}, nb);

    std::vector<Root> roots;
    for (int m = 0; m < nb; ++m) {
      for (int i = 0; i < n; ++i) {
        const int ip = (i + 1) % n;
        double ta = j1_at(i);
        double tb = ip == 0 ? j1_at(0) + 1.0 : j1_at(ip);
        double fa = mesh[i][m] - w2;
        double fb = mesh[ip][m] - w2;
        if (fa == 0.0) {
          roots.push_back({ta, m});
          continue;
        }
        if (fb == 0.0 || (fa > 0.0) == (fb > 0.0)) continue;
        // Illinois regula falsi, halving the stale end's weight
        double t = ta;
        double ft = fa;
        int stale = 0;
        bool ok = false;
        for (int it = 0; it < opt.max_iterations; ++it) {
          t = (ta * fb - tb * fa) / (fb - fa);
          if (!(t > ta && t < tb)) t = 0.5 * (ta + tb);
          ft = cell.eigenvalues({t, j2}, m + 1)[m] - w2;
          if (std::abs(ft) <= level_tol) {
            ok = true;
            break;
          }
          if ((ft > 0.0) == (fa > 0.0)) {
            ta = t;
            fa = ft;
            if (stale == -1) fb *= 0.5;
            stale = -1;
          } else {
            tb = t;
            fb = ft;
            if (stale == 1) fa *= 0.5;
            stale = 1;
          }
        }
        if (!ok) {
          spdlog::warn("selection: root of band {} at j2={} not resolved to level tolerance", m, j2);
          continue;
        }
        roots.push_back({wrap_zone(t), m});
      }
    }

    for (const auto& r : roots) {
      const Vec2 j{r.j1, j2};
      auto modes = cell.solve(j, std::max(nb, r.m + 1), side);
      IndexEntry e;
      e.mode = std::move(modes[r.m]);
      e.j = j;
      e.m = r.m;
      e.mu = e.mode.mu;
      e.P = cell.poynting(e.mode);
      if (std::abs(e.mu - w2) > level_tol) continue;
      candidates.push_back(std::move(e));
    }
  }

  IndexSet out;
  out.side = side;
  out.omega = omega;
  out.level_tol = level_tol;
  double pmax = 0.0;
  for (const auto& e : candidates) pmax = std::max(pmax, std::abs(e.P));
  out.c0 = opt.c0 ? *opt.c0 : opt.c0_rel * pmax;

  for (auto& e : candidates) {
    const bool keep = side == Side::plus ? e.P > out.c0 : e.P < -out.c0;
    if (!keep) continue;
    const bool duplicate = std::any_of(out.entries.begin(), out.entries.end(), [&](const IndexEntry& o) {
      return o.m == e.m && std::hypot(periodic_distance(o.j[0], e.j[0]), periodic_distance(o.j[1], e.j[1])) < 1e-6;
    });
    if (duplicate) continue;
    out.entries.push_back(std::move(e));
  }
  std::sort(out.entries.begin(), out.entries.end(), [](const IndexEntry& a, const IndexEntry& b) {
    if (a.j[1] != b.j[1]) return a.j[1] < b.j[1];
    if (a.j[0] != b.j[0]) return a.j[0] < b.j[0];
    return a.m < b.m;
  });
  if (opt.max_modes > 0 && static_cast<int>(out.entries.size()) > opt.max_modes) {
    // keep the rows closest to the target, then the smallest |j1|
    std::stable_sort(out.entries.begin(), out.entries.end(), [&](const IndexEntry& a, const IndexEntry& b) {
      const double da = periodic_distance(a.j[1], opt.target_j2);
      const double db = periodic_distance(b.j[1], opt.target_j2);
      if (std::abs(da - db) > 1e-12) return da < db;
      return std::abs(a.j[0]) < std::abs(b.j[0]);
    });
    out.entries.resize(static_cast<std::size_t>(opt.max_modes));
    std::sort(out.entries.begin(), out.entries.end(), [](const IndexEntry& a, const IndexEntry& b) {
      if (a.j[1] != b.j[1]) return a.j[1] < b.j[1];
      if (a.j[0] != b.j[0]) return a.j[0] < b.j[0];
      return a.m < b.m;
    });
  }
  for (auto& e : out.entries) {
    const auto gv = cell.group_velocity(e.j, e.m, nb, opt.dj);
    e.vg = gv.vg;
    e.degenerate = gv.degenerate;
  }
  if (out.empty()) {
    spdlog::warn("selection: no outgoing Bloch modes on side {} at omega={}", side_name(side), omega);
  }
  return out;
}

bool incoming_admissible(double omega, const Vec2& j_in) {
  const double w2 = omega * omega;
  return std::abs(j_in[0] * j_in[0] + j_in[1] * j_in[1] - w2) < 1e-6 * w2;
}

Vec2 incoming_wave_vector(double omega, int q, int K, double eps) {
  const double j2 = 2.0 * std::numbers::pi * q / (eps * K);
  const double r = omega * omega - j2 * j2;
  if (!(r > 0.0)) throw ConfigError("incoming wave: row q=" + std::to_string(q) + " is evanescent at this omega");
  return {std::sqrt(r), j2};
}

}  // namespace blochguide
