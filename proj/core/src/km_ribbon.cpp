// Kane-Mele zigzag ribbon.
//
// Geometry (lattice constant 1, bond length 1/sqrt(3)), chain c = 0..N-1:
//   A_c at (c*sqrt(3)/2,                c/2)
//   B_c at (c*sqrt(3)/2 + 1/(2sqrt(3)), c/2 + 1/2)
// plus integer shifts along y. Every chain is a zigzag line along y; the x=0
// edge is terminated by A sites and the far edge by B sites, each with two
// in-ribbon neighbours. Site index 2c is A_c, 2c+1 is B_c; orbital index is
// 2*site + spin.

#include <cmath>
#include <stdexcept>

#include "dgprobe/models.hpp"

namespace dgprobe {

namespace {

const double kSqrt3 = std::sqrt(3.0);
const double kBond = 1.0 / kSqrt3;
const cplx I{0.0, 1.0};

struct Point {
  double x, y;
};

Point site_position(std::size_t site, int period) {
  const double c = static_cast<double>(site / 2);
  Point p{c * kSqrt3 / 2.0, c / 2.0 + period};
  if (site % 2 == 1) {
    p.x += 1.0 / (2.0 * kSqrt3);
    p.y += 0.5;
  }
  return p;
}

bool near(double a, double b) { return std::abs(a - b) < 1e-9; }

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

std::vector<KaneMeleSite> km_ribbon_sites(std::size_t n_cells_x) {
  std::vector<KaneMeleSite> sites;
  for (std::size_t s = 0; s < 2 * n_cells_x; ++s) {
    const Point p = site_position(s, 0);
    sites.push_back({s, static_cast<int>(s / 2), static_cast<int>(s % 2), p.x, p.y});
  }
  return sites;
}

std::vector<KaneMeleBond> km_nearest_bonds(std::size_t n_cells_x) {
  std::vector<KaneMeleBond> bonds;
  const std::size_t n = 2 * n_cells_x;
  for (std::size_t i = 0; i < n; ++i) {
    for (int period = -1; period <= 1; ++period) {
      for (std::size_t j = 0; j < n; ++j) {
        const Point a = site_position(i, 0), b = site_position(j, period);
        if (near(distance(a, b), kBond)) bonds.push_back({i, j, period, b.x - a.x, b.y - a.y, 0});
      }
    }
  }
  return bonds;
}

std::vector<KaneMeleBond> km_second_bonds(std::size_t n_cells_x) {
  std::vector<KaneMeleBond> bonds;
  const std::size_t n = 2 * n_cells_x;
  for (std::size_t i = 0; i < n; ++i) {
    for (int period = -1; period <= 1; ++period) {
      for (std::size_t j = 0; j < n; ++j) {
        const Point from = site_position(i, 0), to = site_position(j, period);
        if (!near(distance(from, to), 1.0)) continue;
        // v = +1 for a left turn on the two-bond path from -> mid -> to.
        int turn = 0;
        for (int mp = -2; mp <= 2 && turn == 0; ++mp) {
          for (std::size_t m = 0; m < n; ++m) {
            const Point mid = site_position(m, mp);
            if (!near(distance(from, mid), kBond) || !near(distance(mid, to), kBond)) continue;
            const double cross = (mid.x - from.x) * (to.y - mid.y) - (mid.y - from.y) * (to.x - mid.x);
            turn = cross > 0.0 ? 1 : -1;
            break;
          }
        }
        if (turn == 0) throw std::logic_error("km_second_bonds: second neighbours without a common neighbour");
        bonds.push_back({i, j, period, to.x - from.x, to.y - from.y, turn});
      }
    }
  }
  return bonds;
}

RibbonModel km_ribbon(std::size_t n_cells_x, const KaneMeleParameters& p) {
  if (n_cells_x < 2) throw InvalidInput("km_ribbon: n_cells_x must be at least 2");
  const std::size_t n_sites = 2 * n_cells_x;
  const std::size_t dim = 2 * n_sites;

  RibbonModel m;
  m.name = "km-ribbon";
  m.momentum_axis = "ky";
  m.cells = n_cells_x;
  m.parameters = {{"lambda_so", p.lambda_so},
                  {"lambda_r", p.lambda_r},
                  {"lambda_v", p.lambda_v},
                  {"n_x", static_cast<double>(n_cells_x)}};

  m.v = ComplexMatrix(dim, dim);
  for (const auto& s : km_ribbon_sites(n_cells_x)) {
    for (int spin = 0; spin < 2; ++spin) {
      const std::size_t o = 2 * s.index + spin;
      m.v(o, o) = s.sublattice == 0 ? 1.0 : -1.0;
      m.geometry.orbitals.push_back({s.x, s.y, s.chain, s.sublattice, spin});
    }
  }
  m.geometry.open_min = 0.0;
  m.geometry.open_max = site_position(n_sites - 1, 0).x;

  // Real-space blocks per (i, j, period): element <i| H |j, period>, spin 2x2.
  struct Term {
    std::size_t row, col;
    int period;
    ComplexMatrix spin_block;
  };
  std::vector<Term> terms;
  const ComplexMatrix s0 = pauli_0(), sx = pauli_x(), sy = pauli_y(), sz = pauli_z();

  for (std::size_t s = 0; s < n_sites; ++s) {
    const double xi = s % 2 == 0 ? 1.0 : -1.0;
    terms.push_back({s, s, 0, s0 * (p.lambda_v * xi)});
  }
  for (const auto& b : km_nearest_bonds(n_cells_x)) {
    // Hopping into site `from` out of `to`: d points from `to` to `from`.
    const double dx = -b.dx / kBond, dy = -b.dy / kBond;
    ComplexMatrix block = s0;
    block += (sx * dy - sy * dx) * (I * p.lambda_r);
    terms.push_back({b.from, b.to, b.period_offset, block});
  }
  for (const auto& b : km_second_bonds(n_cells_x)) {
    // c^dagger_from c_to travels to -> from, the reverse of the recorded turn.
    const double v_ij = -b.turn;
    terms.push_back({b.from, b.to, b.period_offset, sz * (I * p.lambda_so * v_ij)});
  }

  m.h_of_k = [terms, dim](double ky) {
    ComplexMatrix h(dim, dim);
    for (const auto& t : terms) {
      const cplx phase = std::polar(1.0, ky * t.period);
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) h(2 * t.row + a, 2 * t.col + b) += t.spin_block(a, b) * phase;
    }
    return h;
  };
  return m;
}

}  // namespace dgprobe
