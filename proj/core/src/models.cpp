#include "dgprobe/models.hpp"

#include <cmath>
#include <sstream>

namespace dgprobe {

namespace {
const cplx I{0.0, 1.0};
}

double FourVector::magnitude() const { return std::sqrt(rx * rx + ry * ry + rz * rz); }

ComplexMatrix pauli_0() { return ComplexMatrix::identity(2); }
ComplexMatrix pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix pauli_y() { return {{0.0, -I}, {I, 0.0}}; }
ComplexMatrix pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

ComplexMatrix bloch_matrix(const FourVector& r) {
  return {{r.r0 + r.rz, cplx(r.rx, -r.ry)}, {cplx(r.rx, r.ry), r.r0 - r.rz}};
}

MultiBandBloch as_multiband(const TwoBandBloch& model) {
  MultiBandBloch m;
  m.name = model.name;
  m.dimension = model.dimension;
  m.bands = 2;
  m.h_of_k = [r = model.r_of_k](const Momentum& k) { return bloch_matrix(r(k)); };
  m.v = pauli_z();
  m.parameters = model.parameters;
  m.warnings = model.warnings;
  return m;
}

LatticeModel RibbonModel::at(double k) const {
  LatticeModel m;
  std::ostringstream os;
  os << name << "@" << momentum_axis << "=" << k;
  m.name = os.str();
  m.h = h_of_k(k);
  m.v = v;
  m.geometry = geometry;
  m.filling = filling;
  m.parameters = parameters;
  m.parameters[momentum_axis] = k;
  m.warnings = warnings;
  return m;
}

TwoBandBloch ssh_bloch(double phi) {
  TwoBandBloch m;
  m.name = "ssh";
  m.dimension = 1;
  m.parameters = {{"phi", phi}};
  if (phi < -1.0 || phi > 1.0) {
    m.warnings.push_back("phi outside [-1, 1]: hopping amplitudes change sign");
  }
  // Off-diagonal element -(1 + phi) - (1 - phi) exp(-ik) = rx - i ry.
  m.r_of_k = [phi](const Momentum& k) {
    FourVector r;
    r.rx = -(1.0 + phi) - (1.0 - phi) * std::cos(k[0]);
    r.ry = -(1.0 - phi) * std::sin(k[0]);
    return r;
  };
  return m;
}

TwoBandBloch qwz_bloch(double mass) {
  TwoBandBloch m;
  m.name = "qwz";
  m.dimension = 2;
  m.parameters = {{"M", mass}};
  m.r_of_k = [mass](const Momentum& k) {
    FourVector r;
    r.rx = std::sin(k[0]);
    r.ry = std::sin(k[1]);
    r.rz = 2.0 + mass - std::cos(k[0]) - std::cos(k[1]);
    return r;
  };
  return m;
}

MultiBandBloch weyl_bloch(const WeylParameters& p) {
  // Orbital (sigma) index is the slow one: basis |orbital, spin>.
  const ComplexMatrix s0 = pauli_0(), sx = pauli_x(), sy = pauli_y(), sz = pauli_z();
  const ComplexMatrix z_x = kron(sz, sx), z_y = kron(sz, sy);
  const ComplexMatrix y_0 = kron(sy, s0), x_0 = kron(sx, s0);
  ComplexMatrix fixed = kron(sy, sy) * p.b0 - kron(sx, sx) * p.b1 + kron(sx, sy) * p.b2 + kron(s0, sz) * p.b3;

  MultiBandBloch m;
  m.name = "weyl";
  m.dimension = 3;
  m.bands = 4;
  m.parameters = {{"epsilon", p.epsilon}, {"t", p.hopping}, {"lambda", p.lambda}, {"lambda_z", p.lambda_z},
                  {"b0", p.b0},           {"b1", p.b1},     {"b2", p.b2},         {"b3", p.b3}};
  m.h_of_k = [=](const Momentum& k) {
    const double mk = p.epsilon - 2.0 * p.hopping * (std::cos(k[0]) + std::cos(k[1]) + std::cos(k[2]));
    ComplexMatrix h = fixed;
    h += z_x * (2.0 * p.lambda * std::sin(k[1]));
    h -= z_y * (2.0 * p.lambda * std::sin(k[0]));
    h += y_0 * (2.0 * p.lambda_z * std::sin(k[2]));
    h += x_0 * mk;
    return h;
  };
  m.v = kron(sz, s0);
  return m;
}

LatticeModel ssh_chain(std::size_t n_sites, double phi, Boundary boundary) {
  if (n_sites % 2 != 0) throw InvalidInput("ssh_chain: n_sites must be even (two sites per dimerized cell)");
  if (n_sites < 4) throw InvalidInput("ssh_chain: n_sites must be at least 4");

  LatticeModel m;
  m.name = boundary == Boundary::Open ? "ssh-open" : "ssh-periodic";
  m.parameters = {{"phi", phi}, {"n_sites", static_cast<double>(n_sites)}};
  if (phi < -1.0 || phi > 1.0) m.warnings.push_back("phi outside [-1, 1]");
  m.h = ComplexMatrix(n_sites, n_sites);
  m.v = ComplexMatrix(n_sites, n_sites);
  const std::size_t bonds = boundary == Boundary::Open ? n_sites - 1 : n_sites;
  for (std::size_t i = 0; i < bonds; ++i) {
    const std::size_t j = (i + 1) % n_sites;
    const double hop = -1.0 + (i % 2 == 0 ? phi : -phi);
    m.h(i, j) += hop;
    m.h(j, i) += hop;
  }
  for (std::size_t i = 0; i < n_sites; ++i) {
    m.v(i, i) = i % 2 == 0 ? 1.0 : -1.0;
    m.geometry.orbitals.push_back({static_cast<double>(i), 0.0, static_cast<int>(i / 2), static_cast<int>(i % 2), 0});
  }
  m.geometry.open_min = 0.0;
  m.geometry.open_max = static_cast<double>(n_sites - 1);
  return m;
}

LatticeModel ssh_open_chain(std::size_t n_sites, double phi) { return ssh_chain(n_sites, phi, Boundary::Open); }

namespace {

// Block helpers for two-orbital-per-cell lattices.
void add_block(ComplexMatrix& h, std::size_t row_cell, std::size_t col_cell, const ComplexMatrix& block) {
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) h(2 * row_cell + a, 2 * col_cell + b) += block(a, b);
}

// Hopping block T for c^dagger_{r+1} T c_r; with its adjoint it reproduces
// sin(k) sigma_dir - cos(k) sigma_z under c_r = N^-1/2 sum_k e^{ikr} c_k.
ComplexMatrix qwz_hop(const ComplexMatrix& sigma_dir) { return (I * sigma_dir - pauli_z()) * 0.5; }

}  // namespace

RibbonModel qwz_strip(std::size_t n_x, double mass, Boundary x_boundary) {
  if (n_x < 2) throw InvalidInput("qwz_strip: n_x must be at least 2");
  RibbonModel m;
  m.name = x_boundary == Boundary::Open ? "qwz-strip" : "qwz-strip-periodic";
  m.momentum_axis = "ky";
  m.cells = n_x;
  m.parameters = {{"M", mass}, {"n_x", static_cast<double>(n_x)}};
  m.v = kron(ComplexMatrix::identity(n_x), pauli_z());
  for (std::size_t x = 0; x < n_x; ++x)
    for (int o = 0; o < 2; ++o)
      m.geometry.orbitals.push_back({static_cast<double>(x), 0.0, static_cast<int>(x), o, 0});
  m.geometry.open_min = 0.0;
  m.geometry.open_max = static_cast<double>(n_x - 1);

  const ComplexMatrix tx = qwz_hop(pauli_x());
  const ComplexMatrix tx_dag = tx.adjoint();
  const bool wrap = x_boundary == Boundary::Periodic;
  m.h_of_k = [=](double ky) {
    ComplexMatrix h(2 * n_x, 2 * n_x);
    const ComplexMatrix onsite = pauli_z() * (2.0 + mass - std::cos(ky)) + pauli_y() * std::sin(ky);
    for (std::size_t x = 0; x < n_x; ++x) add_block(h, x, x, onsite);
    const std::size_t bonds = wrap ? n_x : n_x - 1;
    for (std::size_t x = 0; x < bonds; ++x) {
      const std::size_t next = (x + 1) % n_x;
      add_block(h, next, x, tx);
      add_block(h, x, next, tx_dag);
    }
    return h;
  };
  return m;
}

LatticeModel qwz_torus(std::size_t n_x, std::size_t n_y, double mass) {
  if (n_x < 2 || n_y < 2) throw InvalidInput("qwz_torus: need at least 2 cells per direction");
  const std::size_t cells = n_x * n_y;
  LatticeModel m;
  m.name = "qwz-torus";
  m.parameters = {{"M", mass}, {"n_x", static_cast<double>(n_x)}, {"n_y", static_cast<double>(n_y)}};
  m.h = ComplexMatrix(2 * cells, 2 * cells);
  m.v = kron(ComplexMatrix::identity(cells), pauli_z());
  const ComplexMatrix onsite = pauli_z() * (2.0 + mass);
  const ComplexMatrix tx = qwz_hop(pauli_x()), ty = qwz_hop(pauli_y());
  const ComplexMatrix tx_dag = tx.adjoint(), ty_dag = ty.adjoint();
  auto cell = [n_y](std::size_t x, std::size_t y) { return x * n_y + y; };
  for (std::size_t x = 0; x < n_x; ++x) {
    for (std::size_t y = 0; y < n_y; ++y) {
      const std::size_t c = cell(x, y);
      add_block(m.h, c, c, onsite);
      const std::size_t cx = cell((x + 1) % n_x, y), cy = cell(x, (y + 1) % n_y);
      add_block(m.h, cx, c, tx);
      add_block(m.h, c, cx, tx_dag);
      add_block(m.h, cy, c, ty);
      add_block(m.h, c, cy, ty_dag);
      for (int o = 0; o < 2; ++o)
        m.geometry.orbitals.push_back({static_cast<double>(x), static_cast<double>(y), static_cast<int>(c), o, 0});
    }
  }
  m.geometry.open_min = 0.0;
  m.geometry.open_max = static_cast<double>(n_x - 1);
  return m;
}

}  // namespace dgprobe
