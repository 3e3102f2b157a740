#pragma once

// Decoherence factor L(t) = <g| exp(-i (h + delta v) t) |g> of a probe qubit
// dephasing-coupled to a free-fermion ground state |g>.

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dgprobe/filling.hpp"
#include "dgprobe/models.hpp"
#include "dgprobe/numkit.hpp"

namespace dgprobe {

/// Two-band closed form, without the global exp(-i r0 t) factor:
///   cos(R_d t) + i (R^2 + delta rz) / (R R_d) sin(R_d t),
///   R_d = sqrt(rx^2 + ry^2 + (rz + delta)^2).
/// Throws NumericFailure when R <= gap floor; use lk_exact there.
cplx lk_closed_form(const FourVector& r, double delta, double t);

/// How the occupied orbitals at a momentum were fixed.
enum class OrbitalChoice {
  Regular,           // unique Fermi sea
  DirectionalLimit,  // degenerate; taken from h(k + eta * direction), eta -> 0+
  LowestIndex,       // degenerate, no usable direction; lowest-index eigenvectors
};

struct EchoValue {
  cplx value;
  OrbitalChoice choice = OrbitalChoice::Regular;

  bool flagged() const { return choice != OrbitalChoice::Regular; }
};

/// Overlap det(Phi^dagger exp(-i h' t) Phi) for a Slater determinant with
/// occupied orbitals in the columns of Phi. h' is diagonalized once.
class SlaterOverlap {
 public:
  SlaterOverlap(const ComplexMatrix& occupied, const ComplexMatrix& perturbed_h);
  SlaterOverlap(const ComplexMatrix& occupied, const EigenSystem& perturbed);

  cplx operator()(double t) const;
  std::size_t particles() const { return particles_; }

 private:
  std::vector<double> energies_;
  ComplexMatrix amplitudes_;  // V^dagger Phi
  std::size_t particles_ = 0;
};

/// Exact decoherence factor for one momentum sector (or any single-particle
/// matrix). Degenerate Fermi levels are resolved by lowest index and flagged.
EchoValue lk_exact(const ComplexMatrix& h, const ComplexMatrix& v, double delta, double t,
                   const FillingRule& filling = {});

/// Decoherence factor at one momentum of a Bloch model, ready for many times.
/// Two-band models use the closed form above the gap floor. At degenerate
/// momenta the Fermi sea is the limit of the one at k + eta * direction.
class MomentumEcho {
 public:
  MomentumEcho(const TwoBandBloch& model, const Momentum& k, double delta, const FillingRule& filling = {},
               const Momentum& direction = {1.0, 0.0, 0.0});
  MomentumEcho(const MultiBandBloch& model, const Momentum& k, double delta, const FillingRule& filling = {},
               const Momentum& direction = {1.0, 0.0, 0.0});

  /// Includes the exp(-i r0 t) phase.
  cplx operator()(double t) const;
  /// log10 |L(t)|^2 without forming L when the closed form applies.
  double log10_modsq(double t) const;
  OrbitalChoice choice() const { return choice_; }
  bool uses_closed_form() const { return closed_; }

 private:
  void init_exact(const std::function<ComplexMatrix(const Momentum&)>& h_of_k, const ComplexMatrix& v,
                  const Momentum& k, double delta, const FillingRule& filling, const Momentum& direction);

  bool closed_ = false;
  double r0_ = 0.0;
  double rd_ = 0.0;         // R(k, delta)
  double amplitude_ = 0.0;  // (R^2 + delta rz) / (R R_d)
  std::optional<SlaterOverlap> exact_;
  OrbitalChoice choice_ = OrbitalChoice::Regular;
};

enum class SeriesKind { PerMomentum, Product, RealSpace };

struct DecoherenceSeries {
  SeriesKind kind = SeriesKind::PerMomentum;
  std::vector<double> times;
  /// L(t); for products reconstructed from log10_modsq and phase (it may
  /// underflow to 0 for large grids).
  std::vector<cplx> values;
  std::vector<double> log10_modsq;
  /// arg L(t) wrapped to (-pi, pi], global phase included.
  std::vector<double> phase;
  /// Momenta (or, for real space, 1) resolved by the degeneracy policy.
  std::size_t flagged = 0;

  double modsq(std::size_t i) const;
};

/// Monkhorst-style uniform grid k = 2 pi m / N per axis, m chosen so that
/// k lies in [-pi, pi). Points are ordered lexicographically, kx slowest.
struct MomentumGrid {
  int dimension = 1;
  std::array<std::size_t, 3> sizes{1, 1, 1};

  static MomentumGrid uniform(int dimension, std::size_t n);
  static MomentumGrid of(std::span<const std::size_t> sizes);

  std::size_t size() const { return sizes[0] * sizes[1] * sizes[2]; }
  std::vector<double> axis(int a) const;
  Momentum point(std::size_t flat) const;
};

double grid_coordinate(std::ptrdiff_t m, std::size_t n);

/// t_j = t_max * j / steps for j = 0..steps.
std::vector<double> time_grid(double t_max, std::size_t steps);
inline std::vector<double> default_time_grid() { return time_grid(20.0, 400); }

DecoherenceSeries momentum_series(const TwoBandBloch& model, const Momentum& k, double delta,
                                  std::span<const double> times, const FillingRule& filling = {});
DecoherenceSeries momentum_series(const MultiBandBloch& model, const Momentum& k, double delta,
                                  std::span<const double> times, const FillingRule& filling = {});

struct ProductOptions {
  FillingRule filling;
  bool with_phase = true;
  unsigned threads = 1;
};

/// L(t) = prod_k L_k(t), accumulated in the log domain in ascending-k order.
DecoherenceSeries product_series(const TwoBandBloch& model, const MomentumGrid& grid, double delta,
                                 std::span<const double> times, const ProductOptions& options = {});
DecoherenceSeries product_series(const MultiBandBloch& model, const MomentumGrid& grid, double delta,
                                 std::span<const double> times, const ProductOptions& options = {});

/// Many-body overlap for a finite lattice, filling taken from the model.
DecoherenceSeries realspace_series(const LatticeModel& model, double delta, std::span<const double> times);

}  // namespace dgprobe
