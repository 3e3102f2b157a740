#pragma once

// Hamiltonian builders for the probe-qubit case studies. Every builder pairs
// the system matrix with the qubit coupling operator `v` (the operator that
// multiplies delta |1><1| in the interaction), so the perturbed Hamiltonian
// seen by the excited qubit branch is h + delta * v.

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dgprobe/filling.hpp"
#include "dgprobe/numkit.hpp"

namespace dgprobe {

/// Crystal momentum in units of the inverse lattice constant. Unused
/// components of lower-dimensional models stay zero.
using Momentum = std::array<double, 3>;
using ParameterMap = std::map<std::string, double>;

/// Bloch coefficients of H(k) = r0 + rx sx + ry sy + rz sz.
struct FourVector {
  double r0 = 0.0;
  double rx = 0.0;
  double ry = 0.0;
  double rz = 0.0;

  double magnitude() const;
};

ComplexMatrix pauli_0();
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

ComplexMatrix bloch_matrix(const FourVector& r);

struct TwoBandBloch {
  std::string name;
  int dimension = 1;
  std::function<FourVector(const Momentum&)> r_of_k;
  ParameterMap parameters;
  std::vector<std::string> warnings;

  FourVector at(const Momentum& k) const { return r_of_k(k); }
  ComplexMatrix hamiltonian(const Momentum& k) const { return bloch_matrix(r_of_k(k)); }
  /// The qubit couples as sigma_z on the two orbitals of every cell.
  ComplexMatrix perturbation() const { return pauli_z(); }
};

struct MultiBandBloch {
  std::string name;
  int dimension = 3;
  std::size_t bands = 0;
  std::function<ComplexMatrix(const Momentum&)> h_of_k;
  ComplexMatrix v;
  ParameterMap parameters;
  std::vector<std::string> warnings;

  ComplexMatrix hamiltonian(const Momentum& k) const { return h_of_k(k); }
  const ComplexMatrix& perturbation() const { return v; }
};

MultiBandBloch as_multiband(const TwoBandBloch& model);

/// One row per basis orbital of a real-space or ribbon matrix.
struct Orbital {
  double x = 0.0;
  double y = 0.0;
  int cell = 0;
  int sublattice = 0;  // 0 = A, 1 = B
  int spin = 0;        // 0 = up, 1 = down; 0 for spinless models
};

struct Geometry {
  std::vector<Orbital> orbitals;
  /// Extent of the open direction, used for edge-weight windows.
  double open_min = 0.0;
  double open_max = 0.0;
};

struct LatticeModel {
  std::string name;
  ComplexMatrix h;
  ComplexMatrix v;
  Geometry geometry;
  FillingRule filling;
  ParameterMap parameters;
  std::vector<std::string> warnings;
};

/// Periodic along one axis (momentum `k`), open along the other.
struct RibbonModel {
  std::string name;
  std::string momentum_axis = "ky";
  std::size_t cells = 0;
  std::function<ComplexMatrix(double)> h_of_k;
  ComplexMatrix v;
  Geometry geometry;
  FillingRule filling;
  ParameterMap parameters;
  std::vector<std::string> warnings;

  std::size_t dimension() const { return v.rows(); }
  LatticeModel at(double k) const;
};

enum class Boundary { Open, Periodic };

TwoBandBloch ssh_bloch(double phi);
TwoBandBloch qwz_bloch(double mass);

struct WeylParameters {
  double epsilon = 6.0;
  double hopping = 1.0;
  double lambda = 2.0;
  double lambda_z = 2.0;
  double b0 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double b3 = 0.0;
};

MultiBandBloch weyl_bloch(const WeylParameters& p);

/// Dimerized chain: bond (i, i+1), i counted from 0, carries -1 + (-1)^i phi.
/// The qubit couples as +1/-1 on even/odd sites.
LatticeModel ssh_chain(std::size_t n_sites, double phi, Boundary boundary);
LatticeModel ssh_open_chain(std::size_t n_sites, double phi);

/// QWZ strip: n_x cells (two orbitals each) along x, momentum k_y kept.
RibbonModel qwz_strip(std::size_t n_x, double mass, Boundary x_boundary = Boundary::Open);
/// Fully real-space QWZ torus, n_x * n_y cells, both directions periodic.
LatticeModel qwz_torus(std::size_t n_x, std::size_t n_y, double mass);

struct KaneMeleParameters {
  double lambda_so = 0.06;
  double lambda_r = 0.05;
  double lambda_v = 0.1 / 1.7320508075688772;
};

/// Zigzag honeycomb ribbon: n_cells_x zigzag chains across x (one A and one B
/// site per chain per period), periodic along y with unit period.
RibbonModel km_ribbon(std::size_t n_cells_x, const KaneMeleParameters& p);

/// Site table of one ribbon period; positions in units of the lattice constant.
struct KaneMeleSite {
  std::size_t index;  // site index (orbital index / 2)
  int chain;
  int sublattice;
  double x;
  double y;
};
std::vector<KaneMeleSite> km_ribbon_sites(std::size_t n_cells_x);

/// A bond of the ribbon, from site `from` in period 0 to site `to` in period
/// `period_offset` along y.
struct KaneMeleBond {
  std::size_t from;
  std::size_t to;
  int period_offset;
  double dx;
  double dy;
  int turn;  // v_ij for second neighbours, 0 for nearest neighbours
};
std::vector<KaneMeleBond> km_nearest_bonds(std::size_t n_cells_x);
std::vector<KaneMeleBond> km_second_bonds(std::size_t n_cells_x);

}  // namespace dgprobe
