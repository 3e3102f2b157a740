#include "dgprobe/filling.hpp"

#include <cmath>

#include "dgprobe/numkit.hpp"

namespace dgprobe {

Occupation select_occupied(std::span<const double> eigenvalues, const FillingRule& rule) {
  const double tol = kNumericPolicy.zero_mode_tol;
  const std::size_t n = eigenvalues.size();
  Occupation occ;

  if (rule.mode == FillMode::LowestCount) {
    if (rule.count > n) throw InvalidInput("FillingRule: more occupied levels requested than available");
    for (std::size_t i = 0; i < rule.count; ++i) occ.indices.push_back(i);
    if (rule.count > 0 && rule.count < n &&
        eigenvalues[rule.count] - eigenvalues[rule.count - 1] <= tol) {
      occ.degenerate = true;
    }
    return occ;
  }

  const std::size_t half = n / 2;
  std::size_t zero_modes = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (eigenvalues[i] < -tol) {
      occ.indices.push_back(i);
    } else if (std::abs(eigenvalues[i]) <= tol) {
      ++zero_modes;
      if (occ.indices.size() < half) occ.indices.push_back(i);
    }
  }
  // Ambiguous only when the zero-mode manifold is split between filled and empty.
  std::size_t filled_zero = 0;
  for (auto i : occ.indices)
    if (std::abs(eigenvalues[i]) <= tol) ++filled_zero;
  occ.degenerate = filled_zero > 0 && filled_zero < zero_modes;
  return occ;
}

}  // namespace dgprobe
