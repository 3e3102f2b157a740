#include <algorithm>
#include <cmath>
#include <limits>

#include "dgprobe/analysis.hpp"
#include "dgprobe/parallel.hpp"

namespace dgprobe {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw InvalidInput("linspace: need at least 2 points");
  std::vector<double> x(n);
  const double span = hi - lo;
  const double last = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) x[i] = lo + span * static_cast<double>(i) / last;
  x.back() = hi;
  return x;
}

std::vector<std::size_t> detect_cusps(std::span<const double> grid, std::span<const double> values, double chi,
                                      CuspPolarity polarity) {
  if (grid.size() != values.size()) throw InvalidInput("detect_cusps: grid and values differ in length");
  const std::size_t n = values.size();
  std::vector<std::size_t> cusps;
  if (n < 5) return cusps;

  std::vector<double> d2(n, 0.0), magnitude(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = grid[i] - grid[i - 1], h2 = grid[i + 1] - grid[i];
    d2[i] = 2.0 * ((values[i + 1] - values[i]) / h2 - (values[i] - values[i - 1]) / h1) / (h1 + h2);
    magnitude[i] = std::abs(d2[i]);
  }
  std::vector<double> inner(magnitude.begin() + 1, magnitude.end() - 1);
  std::nth_element(inner.begin(), inner.begin() + inner.size() / 2, inner.end());
  const double median = inner[inner.size() / 2];

  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  const double floor = 1e-12 * std::max(1.0, scale);
  const double threshold = std::max(chi * median, floor);

  const double sign = polarity == CuspPolarity::Peaks ? -1.0 : 1.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double c = polarity == CuspPolarity::Both ? magnitude[i] : sign * d2[i];
    const double prev = polarity == CuspPolarity::Both ? magnitude[i - 1] : sign * d2[i - 1];
    const double next = polarity == CuspPolarity::Both ? magnitude[i + 1] : sign * d2[i + 1];
    if (c > threshold && c >= prev && c >= next) cusps.push_back(i);
  }
  return cusps;
}

namespace {

double reduce(const DecoherenceSeries& s, Diagnostic kind) {
  if (kind == Diagnostic::SnapshotLog10) return s.log10_modsq.front();
  const double lo = *std::min_element(s.log10_modsq.begin(), s.log10_modsq.end());
  return kind == Diagnostic::MinModulusSq ? std::pow(10.0, lo) : lo;
}

}  // namespace

ScanResult sweep_parameter(const std::string& parameter, const ModelFamily& family, std::span<const double> values,
                           const MomentumGrid& grid, double delta, std::span<const double> times,
                           const SweepOptions& options) {
  if (values.size() < 5) throw InvalidInput("sweep_parameter: need at least 5 parameter values");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1])) throw InvalidInput("sweep_parameter: parameter grid must be strictly ascending");

  const std::vector<double> snapshot{options.snapshot_time};
  const std::span<const double> eval_times =
      options.diagnostic == Diagnostic::SnapshotLog10 ? std::span<const double>(snapshot) : times;
  if (eval_times.empty()) throw InvalidInput("sweep_parameter: empty time grid");

  ScanResult result;
  result.parameter = parameter;
  result.grid.assign(values.begin(), values.end());
  result.diagnostic.assign(values.size(), 0.0);

  ProductOptions product;
  product.filling = options.filling;
  product.with_phase = false;

  parallel_for(values.size(), options.threads, [&](std::size_t i) {
    const DecoherenceSeries series = std::visit(
        [&](const auto& make) -> DecoherenceSeries {
          auto model = make(values[i]);
          if constexpr (std::is_same_v<decltype(model), LatticeModel>) {
            return realspace_series(model, delta, eval_times);
          } else {
            return product_series(model, grid, delta, eval_times, product);
          }
        },
        family);
    result.diagnostic[i] = reduce(series, options.diagnostic);
  });

  result.cusps = detect_cusps(result.grid, result.diagnostic, options.chi, options.polarity);
  return result;
}

PathScan momentum_path_scan(const MultiBandBloch& model, std::span<const PathVertex> path,
                            std::size_t samples_per_segment, double delta, double t, const FillingRule& filling) {
  if (path.size() < 2) throw InvalidInput("momentum_path_scan: path needs at least 2 points");
  if (samples_per_segment < 1) throw InvalidInput("momentum_path_scan: need at least one sample per segment");

  PathScan scan;
  double s0 = 0.0;
  for (std::size_t seg = 0; seg + 1 < path.size(); ++seg) {
    const Momentum& a = path[seg].k;
    const Momentum& b = path[seg + 1].k;
    const Momentum dir{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
    const double length = std::hypot(dir[0], dir[1], dir[2]);
    const bool last = seg + 2 == path.size();
    const std::size_t count = samples_per_segment + (last ? 1 : 0);
    scan.vertex_index.push_back(scan.momenta.size());
    for (std::size_t j = 0; j < count; ++j) {
      const double f = static_cast<double>(j) / static_cast<double>(samples_per_segment);
      Momentum k{a[0] + f * dir[0], a[1] + f * dir[1], a[2] + f * dir[2]};
      if (j == samples_per_segment) k = b;
      scan.momenta.push_back(k);
      scan.arclength.push_back(s0 + f * length);
      // At a degenerate point the Fermi sea is approached along the path.
      const MomentumEcho echo(model, k, delta, filling, dir);
      scan.lk2.push_back(std::norm(echo(t)));
      scan.flagged.push_back(echo.choice() != OrbitalChoice::Regular);
      scan.bands.push_back(eig_hermitian(model.hamiltonian(k)).eigenvalues);
    }
    s0 += length;
  }
  scan.vertex_index.push_back(scan.momenta.size() - 1);
  return scan;
}

std::vector<Localization> edge_localization(const EigenSystem& states, const Geometry& geometry,
                                            double edge_fraction) {
  const ComplexMatrix& v = states.eigenvectors;
  if (geometry.orbitals.size() != v.rows()) throw InvalidInput("edge_localization: geometry does not match states");
  const double extent = geometry.open_max - geometry.open_min;
  const double left_edge = geometry.open_min + edge_fraction * extent;
  const double right_edge = geometry.open_max - edge_fraction * extent;

  std::vector<Localization> out(v.cols());
  for (std::size_t c = 0; c < v.cols(); ++c) {
    Localization& loc = out[c];
    for (std::size_t i = 0; i < v.rows(); ++i) {
      const double w = std::norm(v(i, c));
      loc.ipr += w * w;
      const double x = geometry.orbitals[i].x;
      if (x <= left_edge) loc.left_weight += w;
      if (x >= right_edge) loc.right_weight += w;
    }
  }
  return out;
}

}  // namespace dgprobe
