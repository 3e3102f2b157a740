#include "dgprobe/decoherence.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dgprobe/parallel.hpp"

namespace dgprobe {

namespace {

constexpr std::size_t kProductChunk = 512;

double safe_log10(double modsq) { return std::log10(std::max(modsq, std::numeric_limits<double>::min())); }

double wrap_phase(double x) { return std::remainder(x, 2.0 * std::numbers::pi); }

ComplexMatrix occupied_columns(const EigenSystem& eig, const Occupation& occ) {
  return eig.eigenvectors.select_columns(occ.indices);
}

}  // namespace

cplx lk_closed_form(const FourVector& r, double delta, double t) {
  const double R = r.magnitude();
  if (!(R > kNumericPolicy.gap_floor)) {
    std::ostringstream os;
    os << "lk_closed_form: gap R(k) = " << R << " is at or below the floor " << kNumericPolicy.gap_floor
       << "; the closed form is singular there";
    throw NumericFailure(os.str());
  }
  const double zd = r.rz + delta;
  const double rd = std::sqrt(r.rx * r.rx + r.ry * r.ry + zd * zd);
  const double amplitude = (R * R + delta * r.rz) / (R * rd);
  return {std::cos(rd * t), amplitude * std::sin(rd * t)};
}

SlaterOverlap::SlaterOverlap(const ComplexMatrix& occupied, const ComplexMatrix& perturbed_h)
    : SlaterOverlap(occupied, eig_hermitian(perturbed_h)) {}

SlaterOverlap::SlaterOverlap(const ComplexMatrix& occupied, const EigenSystem& perturbed)
    : energies_(perturbed.eigenvalues),
      amplitudes_(perturbed.eigenvectors.adjoint() * occupied),
      particles_(occupied.cols()) {
  if (occupied.rows() != perturbed.size()) throw InvalidInput("SlaterOverlap: orbital dimension mismatch");
}

cplx SlaterOverlap::operator()(double t) const {
  const std::size_t d = energies_.size(), m = particles_;
  if (m == 0) return 1.0;
  std::vector<cplx> phase(d);
  for (std::size_t i = 0; i < d; ++i) phase[i] = std::polar(1.0, -energies_[i] * t);
  if (m == 1) {
    cplx s{};
    for (std::size_t i = 0; i < d; ++i) s += std::norm(amplitudes_(i, 0)) * phase[i];
    return s;
  }
  ComplexMatrix overlap(m, m);
  for (std::size_t i = 0; i < d; ++i) {
    const auto row = amplitudes_.row(i);
    for (std::size_t a = 0; a < m; ++a) {
      const cplx left = std::conj(row[a]) * phase[i];
      for (std::size_t b = 0; b < m; ++b) overlap(a, b) += left * row[b];
    }
  }
  return det_complex(overlap);
}

EchoValue lk_exact(const ComplexMatrix& h, const ComplexMatrix& v, double delta, double t,
                   const FillingRule& filling) {
  require_hermitian(h, "lk_exact (h)");
  require_hermitian(v, "lk_exact (v)");
  if (h.rows() != v.rows()) throw InvalidInput("lk_exact: h and v have different dimensions");
  const EigenSystem eig = eig_hermitian(h);
  const Occupation occ = select_occupied(eig.eigenvalues, filling);
  const SlaterOverlap overlap(occupied_columns(eig, occ), h + v * delta);
  return {overlap(t), occ.degenerate ? OrbitalChoice::LowestIndex : OrbitalChoice::Regular};
}

MomentumEcho::MomentumEcho(const TwoBandBloch& model, const Momentum& k, double delta, const FillingRule& filling,
                           const Momentum& direction) {
  const FourVector r = model.at(k);
  const double R = r.magnitude();
  r0_ = r.r0;
  if (R > kNumericPolicy.gap_floor && filling.mode == FillMode::NegativeEnergy && std::abs(r.r0) < R) {
    closed_ = true;
    const double zd = r.rz + delta;
    rd_ = std::sqrt(r.rx * r.rx + r.ry * r.ry + zd * zd);
    amplitude_ = (R * R + delta * r.rz) / (R * rd_);
    return;
  }
  init_exact([&model](const Momentum& q) { return model.hamiltonian(q); }, model.perturbation(), k, delta, filling,
             direction);
}

MomentumEcho::MomentumEcho(const MultiBandBloch& model, const Momentum& k, double delta, const FillingRule& filling,
                           const Momentum& direction) {
  init_exact(model.h_of_k, model.v, k, delta, filling, direction);
}

void MomentumEcho::init_exact(const std::function<ComplexMatrix(const Momentum&)>& h_of_k, const ComplexMatrix& v,
                              const Momentum& k, double delta, const FillingRule& filling,
                              const Momentum& direction) {
  const ComplexMatrix h = h_of_k(k);
  const EigenSystem eig = eig_hermitian(h);
  Occupation occ = select_occupied(eig.eigenvalues, filling);
  ComplexMatrix occupied = occupied_columns(eig, occ);

  if (occ.degenerate) {
    choice_ = OrbitalChoice::LowestIndex;
    const double dnorm = std::hypot(direction[0], direction[1], direction[2]);
    if (dnorm > 0.0) {
      for (double eta = 1e-7; eta <= 1e-3; eta *= 10.0) {
        Momentum shifted = k;
        for (int a = 0; a < 3; ++a) shifted[a] += eta * direction[a] / dnorm;
        const EigenSystem near = eig_hermitian(h_of_k(shifted));
        const Occupation near_occ = select_occupied(near.eigenvalues, filling);
        if (!near_occ.degenerate && near_occ.indices.size() == occ.indices.size()) {
          occupied = occupied_columns(near, near_occ);
          choice_ = OrbitalChoice::DirectionalLimit;
          break;
        }
      }
    }
  }
  exact_.emplace(occupied, h + v * delta);
}

cplx MomentumEcho::operator()(double t) const {
  if (closed_) {
    const cplx lk{std::cos(rd_ * t), amplitude_ * std::sin(rd_ * t)};
    return lk * std::polar(1.0, -r0_ * t);
  }
  return (*exact_)(t);
}

double MomentumEcho::log10_modsq(double t) const {
  if (closed_) {
    const double c = std::cos(rd_ * t), s = std::sin(rd_ * t);
    return safe_log10(c * c + amplitude_ * amplitude_ * s * s);
  }
  return safe_log10(std::norm((*exact_)(t)));
}

double DecoherenceSeries::modsq(std::size_t i) const { return std::pow(10.0, log10_modsq[i]); }

double grid_coordinate(std::ptrdiff_t m, std::size_t n) {
  return std::numbers::pi * (2.0 * static_cast<double>(m) / static_cast<double>(n));
}

MomentumGrid MomentumGrid::uniform(int dimension, std::size_t n) {
  if (dimension < 1 || dimension > 3) throw InvalidInput("MomentumGrid: dimension must be 1, 2 or 3");
  MomentumGrid g;
  g.dimension = dimension;
  for (int a = 0; a < dimension; ++a) g.sizes[a] = n;
  return g;
}

MomentumGrid MomentumGrid::of(std::span<const std::size_t> sizes) {
  if (sizes.empty() || sizes.size() > 3) throw InvalidInput("MomentumGrid: need 1 to 3 axis sizes");
  MomentumGrid g;
  g.dimension = static_cast<int>(sizes.size());
  for (std::size_t a = 0; a < sizes.size(); ++a) {
    if (sizes[a] == 0) throw InvalidInput("MomentumGrid: axis size must be positive");
    g.sizes[a] = sizes[a];
  }
  return g;
}

std::vector<double> MomentumGrid::axis(int a) const {
  const std::size_t n = sizes[a];
  std::vector<double> k(n);
  if (a >= dimension) return std::vector<double>(n, 0.0);
  const auto first = -static_cast<std::ptrdiff_t>(n / 2);
  for (std::size_t j = 0; j < n; ++j) k[j] = grid_coordinate(first + static_cast<std::ptrdiff_t>(j), n);
  return k;
}

Momentum MomentumGrid::point(std::size_t flat) const {
  Momentum k{0.0, 0.0, 0.0};
  std::size_t idx[3];
  idx[2] = flat % sizes[2];
  idx[1] = (flat / sizes[2]) % sizes[1];
  idx[0] = flat / (sizes[2] * sizes[1]);
  for (int a = 0; a < dimension; ++a) {
    const auto first = -static_cast<std::ptrdiff_t>(sizes[a] / 2);
    k[a] = grid_coordinate(first + static_cast<std::ptrdiff_t>(idx[a]), sizes[a]);
  }
  return k;
}

std::vector<double> time_grid(double t_max, std::size_t steps) {
  if (!(t_max > 0.0) || steps == 0) throw InvalidInput("time_grid: need t_max > 0 and at least one step");
  std::vector<double> t(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j) t[j] = t_max * static_cast<double>(j) / static_cast<double>(steps);
  return t;
}

namespace {

template <class Model>
DecoherenceSeries momentum_series_impl(const Model& model, const Momentum& k, double delta,
                                       std::span<const double> times, const FillingRule& filling) {
  const MomentumEcho echo(model, k, delta, filling);
  DecoherenceSeries s;
  s.kind = SeriesKind::PerMomentum;
  s.times.assign(times.begin(), times.end());
  for (double t : times) {
    const cplx l = echo(t);
    s.values.push_back(l);
    s.log10_modsq.push_back(safe_log10(std::norm(l)));
    s.phase.push_back(std::arg(l));
  }
  s.flagged = echo.choice() == OrbitalChoice::Regular ? 0 : 1;
  return s;
}

template <class Model>
DecoherenceSeries product_impl(const Model& model, const MomentumGrid& grid, double delta,
                               std::span<const double> times, const ProductOptions& options) {
  const std::size_t nk = grid.size(), nt = times.size();
  const std::size_t chunks = (nk + kProductChunk - 1) / kProductChunk;
  struct Partial {
    std::vector<double> log_sum, phase_sum;
    std::size_t flagged = 0;
  };
  std::vector<Partial> partial(chunks);

  // Fixed chunk boundaries keep the summation order independent of threads.
  parallel_for(chunks, options.threads, [&](std::size_t c) {
    Partial& p = partial[c];
    p.log_sum.assign(nt, 0.0);
    p.phase_sum.assign(nt, 0.0);
    const std::size_t end = std::min(nk, (c + 1) * kProductChunk);
    for (std::size_t f = c * kProductChunk; f < end; ++f) {
      const MomentumEcho echo(model, grid.point(f), delta, options.filling);
      if (echo.choice() != OrbitalChoice::Regular) ++p.flagged;
      for (std::size_t j = 0; j < nt; ++j) {
        if (options.with_phase) {
          const cplx l = echo(times[j]);
          p.log_sum[j] += safe_log10(std::norm(l));
          p.phase_sum[j] += std::arg(l);
        } else {
          p.log_sum[j] += echo.log10_modsq(times[j]);
        }
      }
    }
  });

  DecoherenceSeries s;
  s.kind = SeriesKind::Product;
  s.times.assign(times.begin(), times.end());
  s.log10_modsq.assign(nt, 0.0);
  std::vector<double> phase(nt, 0.0);
  for (const auto& p : partial) {
    for (std::size_t j = 0; j < nt; ++j) {
      s.log10_modsq[j] += p.log_sum[j];
      phase[j] += p.phase_sum[j];
    }
    s.flagged += p.flagged;
  }
  for (std::size_t j = 0; j < nt; ++j) {
    s.phase.push_back(wrap_phase(phase[j]));
    s.values.push_back(std::polar(std::pow(10.0, 0.5 * s.log10_modsq[j]), s.phase[j]));
  }
  return s;
}

}  // namespace

DecoherenceSeries momentum_series(const TwoBandBloch& model, const Momentum& k, double delta,
                                  std::span<const double> times, const FillingRule& filling) {
  return momentum_series_impl(model, k, delta, times, filling);
}

DecoherenceSeries momentum_series(const MultiBandBloch& model, const Momentum& k, double delta,
                                  std::span<const double> times, const FillingRule& filling) {
  return momentum_series_impl(model, k, delta, times, filling);
}

DecoherenceSeries product_series(const TwoBandBloch& model, const MomentumGrid& grid, double delta,
                                 std::span<const double> times, const ProductOptions& options) {
  return product_impl(model, grid, delta, times, options);
}

DecoherenceSeries product_series(const MultiBandBloch& model, const MomentumGrid& grid, double delta,
                                 std::span<const double> times, const ProductOptions& options) {
  return product_impl(model, grid, delta, times, options);
}

DecoherenceSeries realspace_series(const LatticeModel& model, double delta, std::span<const double> times) {
  require_hermitian(model.h, "realspace_series (h)");
  require_hermitian(model.v, "realspace_series (v)");
  if (model.h.rows() != model.v.rows()) throw InvalidInput("realspace_series: h and v have different dimensions");
  const EigenSystem eig = eig_hermitian(model.h);
  const Occupation occ = select_occupied(eig.eigenvalues, model.filling);
  const SlaterOverlap overlap(occupied_columns(eig, occ), model.h + model.v * delta);

  DecoherenceSeries s;
  s.kind = SeriesKind::RealSpace;
  s.times.assign(times.begin(), times.end());
  for (double t : times) {
    const cplx l = overlap(t);
    s.values.push_back(l);
    s.log10_modsq.push_back(safe_log10(std::norm(l)));
    s.phase.push_back(std::arg(l));
  }
  s.flagged = occ.degenerate ? 1 : 0;
  return s;
}

}  // namespace dgprobe
