#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dgprobe {

enum class FillMode {
  /// All E < 0; zero modes are added in ascending index order up to half filling.
  NegativeEnergy,
  /// The `count` lowest single-particle levels.
  LowestCount,
};

struct FillingRule {
  FillMode mode = FillMode::NegativeEnergy;
  std::size_t count = 0;

  static FillingRule negative_energy() { return {}; }
  static FillingRule lowest(std::size_t m) { return {FillMode::LowestCount, m}; }
};

/// Which eigenvector columns are occupied, and whether the choice was
/// ambiguous (a level at the occupied/empty boundary is degenerate with the
/// next one, or a zero mode had to be assigned by index).
struct Occupation {
  std::vector<std::size_t> indices;
  bool degenerate = false;
};

/// `eigenvalues` must be ascending.
Occupation select_occupied(std::span<const double> eigenvalues, const FillingRule& rule);

}  // namespace dgprobe
