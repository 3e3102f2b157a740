#include <cmath>
#include <numbers>
#include <sstream>

#include "dgprobe/analysis.hpp"

namespace dgprobe {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<cplx> lower_band_state(const TwoBandBloch& model, const Momentum& k) {
  const FourVector r = model.at(k);
  if (!(r.magnitude() > kNumericPolicy.gap_floor)) {
    std::ostringstream os;
    os << model.name << ": gapless grid point at k = (" << k[0] << ", " << k[1] << "), R = " << r.magnitude();
    throw NumericFailure(os.str());
  }
  return eig_hermitian(bloch_matrix(r)).eigenvectors.column(0);
}

}  // namespace

double berry_phase_of_loop(std::span<const std::vector<cplx>> states) {
  cplx product = 1.0;
  for (std::size_t j = 0; j < states.size(); ++j) {
    const cplx link = inner(states[j], states[(j + 1) % states.size()]);
    product *= link / std::abs(link);
  }
  double phase = -std::arg(product);
  phase = std::fmod(phase, kTwoPi);
  if (phase < 0.0) phase += kTwoPi;
  return phase;
}

ZakPhase zak_phase(const TwoBandBloch& model, std::size_t n_k) {
  if (model.dimension != 1) throw InvalidInput("zak_phase: model must be one-dimensional");
  if (n_k < 32) throw InvalidInput("zak_phase: need at least 32 momenta");
  const MomentumGrid grid = MomentumGrid::uniform(1, n_k);
  std::vector<std::vector<cplx>> states;
  states.reserve(n_k);
  for (std::size_t j = 0; j < n_k; ++j) states.push_back(lower_band_state(model, grid.point(j)));

  ZakPhase z;
  z.raw = berry_phase_of_loop(states);
  const double pi = std::numbers::pi;
  if (std::min(z.raw, kTwoPi - z.raw) < 0.1) {
    z.value = 0.0;
    z.quantized = true;
  } else if (std::abs(z.raw - pi) < 0.1) {
    z.value = pi;
    z.quantized = true;
  } else {
    z.value = z.raw;
  }
  return z;
}

double lattice_field_strength_sum(std::span<const std::vector<cplx>> states, std::size_t nx, std::size_t ny) {
  if (states.size() != nx * ny) throw InvalidInput("lattice_field_strength_sum: state count does not match grid");
  auto at = [&](std::size_t i, std::size_t j) -> const std::vector<cplx>& { return states[(i % nx) * ny + (j % ny)]; };
  double sum = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const cplx u1 = inner(at(i, j), at(i + 1, j));
      const cplx u2 = inner(at(i + 1, j), at(i + 1, j + 1));
      const cplx u3 = inner(at(i + 1, j + 1), at(i, j + 1));
      const cplx u4 = inner(at(i, j + 1), at(i, j));
      sum -= std::arg(u1 * u2 * u3 * u4);
    }
  }
  return sum;
}

ChernNumber chern_number(const TwoBandBloch& model, std::size_t n_k) {
  if (model.dimension != 2) throw InvalidInput("chern_number: model must be two-dimensional");
  if (n_k < 20) throw InvalidInput("chern_number: need at least 20 momenta per axis");
  const MomentumGrid grid = MomentumGrid::uniform(2, n_k);
  std::vector<std::vector<cplx>> states;
  states.reserve(grid.size());
  for (std::size_t f = 0; f < grid.size(); ++f) states.push_back(lower_band_state(model, grid.point(f)));

  ChernNumber c;
  c.raw = lattice_field_strength_sum(states, n_k, n_k) / kTwoPi;
  c.value = static_cast<int>(std::lround(c.raw));
  c.residue = std::abs(c.raw - c.value);
  if (c.residue >= 0.01) {
    std::ostringstream os;
    os << "chern_number: plaquette sum " << c.raw << " is not within 0.01 of an integer";
    throw NumericFailure(os.str());
  }
  return c;
}

}  // namespace dgprobe
