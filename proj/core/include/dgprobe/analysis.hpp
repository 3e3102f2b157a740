#pragma once

// Degeneracy diagnostics built on the decoherence engine: parameter sweeps
// with cusp detection, gap-closing search, momentum-path scans, and the
// topological cross-checks (Zak phase, lattice Chern number).

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dgprobe/decoherence.hpp"
#include "dgprobe/models.hpp"

namespace dgprobe {

std::vector<double> linspace(double lo, double hi, std::size_t n);

enum class Diagnostic {
  MinModulusSq,       // min_t |L(t)|^2
  MinLog10ModulusSq,  // min_t log10 |L(t)|^2
  SnapshotLog10,      // log10 |L(t*)|^2
};

struct ScanResult {
  std::string parameter;
  std::vector<double> grid;
  std::vector<double> diagnostic;
  std::vector<std::size_t> cusps;
};

/// Dips: sharp local minima (positive curvature spikes). A minimum over
/// smooth branches only ever produces concave kinks, so dips isolate
/// gap-closing signatures from branch switching in min_t diagnostics.
enum class CuspPolarity { Dips, Peaks, Both };

/// Indices whose discrete second derivative (sign per `polarity`) is a local
/// peak and exceeds chi times the median |second derivative|. End points are
/// never candidates.
std::vector<std::size_t> detect_cusps(std::span<const double> grid, std::span<const double> values, double chi,
                                      CuspPolarity polarity = CuspPolarity::Dips);

using ModelFamily = std::variant<std::function<TwoBandBloch(double)>, std::function<MultiBandBloch(double)>,
                                 std::function<LatticeModel(double)>>;

struct SweepOptions {
  Diagnostic diagnostic = Diagnostic::MinLog10ModulusSq;
  double snapshot_time = 20.0;
  double chi = 10.0;
  CuspPolarity polarity = CuspPolarity::Dips;
  FillingRule filling;
  unsigned threads = 1;
};

/// Bloch families use the momentum product on `grid`; lattice families use
/// the real-space overlap (grid ignored).
ScanResult sweep_parameter(const std::string& parameter, const ModelFamily& family, std::span<const double> values,
                           const MomentumGrid& grid, double delta, std::span<const double> times,
                           const SweepOptions& options = {});

/// Direct gap between bands d/2 and d/2 + 1 (1-based), the half-filling gap.
double direct_gap(const ComplexMatrix& h);

struct Node {
  Momentum k{};
  double gap = 0.0;
  bool degenerate = false;
  /// Levels within the node tolerance of the mid-gap energy at k.
  std::size_t multiplicity = 0;
};

struct NodeReport {
  std::vector<Node> nodes;  // ascending gap
  double refinement_radius = 0.0;
  double coarse_min_gap = 0.0;

  std::size_t degenerate_count() const;
};

struct NodeOptions {
  int refine_rounds = 3;
  int subdivision = 5;
  /// Continuous minimisation of gap^2 after the grid rounds.
  bool polish = true;
  std::size_t max_candidates = 64;
  unsigned threads = 1;
};

NodeReport locate_nodes(const MultiBandBloch& model, const MomentumGrid& grid, const NodeOptions& options = {});
NodeReport locate_nodes(const TwoBandBloch& model, const MomentumGrid& grid, const NodeOptions& options = {});

/// Smallest direct gap over the grid points.
double min_grid_gap(const MultiBandBloch& model, const MomentumGrid& grid, unsigned threads = 1);

struct PathVertex {
  std::string label;
  Momentum k{};
};

struct PathScan {
  std::vector<double> arclength;
  std::vector<Momentum> momenta;
  std::vector<std::vector<double>> bands;  // bands[i] = spectrum at momenta[i]
  std::vector<double> lk2;
  std::vector<bool> flagged;
  std::vector<std::size_t> vertex_index;  // sample index of each path vertex
};

PathScan momentum_path_scan(const MultiBandBloch& model, std::span<const PathVertex> path,
                            std::size_t samples_per_segment, double delta, double t, const FillingRule& filling = {});

struct ZakPhase {
  double raw = 0.0;    // in [0, 2 pi)
  double value = 0.0;  // raw, snapped to 0 or pi when within 0.1
  bool quantized = false;
};

/// -arg prod_j <u(k_j)|u(k_j+1)> over a closed loop of states.
double berry_phase_of_loop(std::span<const std::vector<cplx>> states);
ZakPhase zak_phase(const TwoBandBloch& model, std::size_t n_k);

struct ChernNumber {
  int value = 0;
  double raw = 0.0;
  double residue = 0.0;
};

/// Sum of plaquette Berry phases (-arg of the link product around each
/// plaquette, same sign convention as berry_phase_of_loop); states[i * ny + j] is the band state at
/// (kx_i, ky_j) on a periodic grid.
double lattice_field_strength_sum(std::span<const std::vector<cplx>> states, std::size_t nx, std::size_t ny);
ChernNumber chern_number(const TwoBandBloch& model, std::size_t n_k);

struct Localization {
  double ipr = 0.0;
  double left_weight = 0.0;
  double right_weight = 0.0;

  double edge_weight() const { return left_weight + right_weight; }
};

/// Per eigenvector: inverse participation ratio and the weight inside the
/// outer `edge_fraction` of the open extent at each edge.
std::vector<Localization> edge_localization(const EigenSystem& states, const Geometry& geometry,
                                            double edge_fraction = 0.1);

}  // namespace dgprobe
