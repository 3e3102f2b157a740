#include <algorithm>
#include <cmath>
#include <numbers>

#include "dgprobe/analysis.hpp"
#include "dgprobe/parallel.hpp"

namespace dgprobe {

double direct_gap(const ComplexMatrix& h) {
  const auto e = eig_hermitian(h).eigenvalues;
  const std::size_t half = e.size() / 2;
  if (half == 0) throw InvalidInput("direct_gap: need at least two bands");
  return e[half] - e[half - 1];
}

std::size_t NodeReport::degenerate_count() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.degenerate; }));
}

namespace {

double wrap(double k) { return std::remainder(k, 2.0 * std::numbers::pi); }

double periodic_distance(const Momentum& a, const Momentum& b) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double d = wrap(a[i] - b[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

struct Evaluated {
  Momentum k;
  double gap;
};

// Nelder-Mead on gap^2, which is smooth (quadratic) at a conical touching.
Evaluated polish(const MultiBandBloch& model, Evaluated start, double step, int dim) {
  auto f = [&](const Momentum& k) {
    const double g = direct_gap(model.hamiltonian(k));
    return g * g;
  };
  const int n = dim;
  std::vector<Momentum> simplex(n + 1, start.k);
  std::vector<double> value(n + 1);
  for (int i = 0; i < n; ++i) simplex[i + 1][i] += step;
  for (int i = 0; i <= n; ++i) value[i] = f(simplex[i]);

  auto combine = [&](const Momentum& a, const Momentum& b, double t) {
    Momentum r{};
    for (int i = 0; i < 3; ++i) r[i] = a[i] + t * (b[i] - a[i]);
    return r;
  };

  for (int iter = 0; iter < 4000; ++iter) {
    std::vector<int> order(n + 1);
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return value[a] < value[b]; });
    std::vector<Momentum> s2;
    std::vector<double> v2;
    for (int i : order) {
      s2.push_back(simplex[i]);
      v2.push_back(value[i]);
    }
    simplex = std::move(s2);
    value = std::move(v2);

    double size = 0.0;
    for (int i = 1; i <= n; ++i) size = std::max(size, periodic_distance(simplex[i], simplex[0]));
    if (size < 1e-13 || value[0] == 0.0) break;

    Momentum centroid{};
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < 3; ++a) centroid[a] += simplex[i][a] / n;

    const Momentum reflected = combine(centroid, simplex[n], -1.0);
    const double fr = f(reflected);
    if (fr < value[0]) {
      const Momentum expanded = combine(centroid, simplex[n], -2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        simplex[n] = expanded;
        value[n] = fe;
      } else {
        simplex[n] = reflected;
        value[n] = fr;
      }
      continue;
    }
    if (fr < value[n - 1]) {
      simplex[n] = reflected;
      value[n] = fr;
      continue;
    }
    const Momentum contracted = combine(centroid, simplex[n], 0.5);
    const double fc = f(contracted);
    if (fc < value[n]) {
      simplex[n] = contracted;
      value[n] = fc;
      continue;
    }
    for (int i = 1; i <= n; ++i) {
      simplex[i] = combine(simplex[0], simplex[i], 0.5);
      value[i] = f(simplex[i]);
    }
  }
  const auto best = std::min_element(value.begin(), value.end()) - value.begin();
  const double gap = std::sqrt(value[best]);
  if (gap < start.gap) return {simplex[best], gap};
  return start;
}

}  // namespace

double min_grid_gap(const MultiBandBloch& model, const MomentumGrid& grid, unsigned threads) {
  std::vector<double> gaps(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t f) { gaps[f] = direct_gap(model.hamiltonian(grid.point(f))); });
  return *std::min_element(gaps.begin(), gaps.end());
}

NodeReport locate_nodes(const MultiBandBloch& model, const MomentumGrid& grid, const NodeOptions& options) {
  const int dim = grid.dimension;
  for (int a = 0; a < dim; ++a)
    if (grid.sizes[a] < 8) throw InvalidInput("locate_nodes: coarse grid needs at least 8 points per axis");

  const std::size_t total = grid.size();
  std::vector<double> gaps(total);
  parallel_for(total, options.threads, [&](std::size_t f) { gaps[f] = direct_gap(model.hamiltonian(grid.point(f))); });

  // Local minima over the periodic 3^d - 1 neighbourhood.
  const auto& n = grid.sizes;
  auto flat = [&](std::ptrdiff_t i, std::ptrdiff_t j, std::ptrdiff_t l) {
    auto m = [](std::ptrdiff_t x, std::size_t size) {
      const auto s = static_cast<std::ptrdiff_t>(size);
      return static_cast<std::size_t>(((x % s) + s) % s);
    };
    return (m(i, n[0]) * n[1] + m(j, n[1])) * n[2] + m(l, n[2]);
  };
  std::vector<std::size_t> minima;
  for (std::size_t f = 0; f < total; ++f) {
    const auto i = static_cast<std::ptrdiff_t>(f / (n[1] * n[2]));
    const auto j = static_cast<std::ptrdiff_t>((f / n[2]) % n[1]);
    const auto l = static_cast<std::ptrdiff_t>(f % n[2]);
    bool is_min = true;
    for (int di = -1; di <= 1 && is_min; ++di)
      for (int dj = dim > 1 ? -1 : 0; dj <= (dim > 1 ? 1 : 0) && is_min; ++dj)
        for (int dl = dim > 2 ? -1 : 0; dl <= (dim > 2 ? 1 : 0) && is_min; ++dl) {
          if (di == 0 && dj == 0 && dl == 0) continue;
          if (gaps[flat(i + di, j + dj, l + dl)] < gaps[f]) is_min = false;
        }
    if (is_min) minima.push_back(f);
  }
  std::stable_sort(minima.begin(), minima.end(), [&](std::size_t a, std::size_t b) { return gaps[a] < gaps[b]; });
  if (minima.size() > options.max_candidates) minima.resize(options.max_candidates);

  double coarse_step = 0.0;
  for (int a = 0; a < dim; ++a) coarse_step = std::max(coarse_step, 2.0 * std::numbers::pi / static_cast<double>(n[a]));

  std::vector<Evaluated> refined(minima.size());
  double final_step = coarse_step;
  for (int r = 0; r < options.refine_rounds; ++r) final_step /= options.subdivision;

  parallel_for(minima.size(), options.threads, [&](std::size_t c) {
    Evaluated best{grid.point(minima[c]), gaps[minima[c]]};
    std::array<double, 3> step{};
    for (int a = 0; a < dim; ++a) step[a] = 2.0 * std::numbers::pi / static_cast<double>(n[a]);
    const int span = options.subdivision;
    for (int round = 0; round < options.refine_rounds; ++round) {
      for (int a = 0; a < dim; ++a) step[a] /= options.subdivision;
      const Momentum centre = best.k;
      const int jr = dim > 1 ? span : 0, lr = dim > 2 ? span : 0;
      for (int i = -span; i <= span; ++i)
        for (int j = -jr; j <= jr; ++j)
          for (int l = -lr; l <= lr; ++l) {
            Momentum k = centre;
            k[0] += i * step[0];
            k[1] += j * step[1];
            k[2] += l * step[2];
            const double g = direct_gap(model.hamiltonian(k));
            if (g < best.gap) best = {k, g};
          }
    }
    if (options.polish && best.gap > 0.0) best = polish(model, best, final_step, dim);
    for (int a = 0; a < dim; ++a) best.k[a] = wrap(best.k[a]);
    for (int a = 0; a < 3; ++a)
      if (best.k[a] == 0.0) best.k[a] = 0.0;  // drop negative zero
    refined[c] = best;
  });

  NodeReport report;
  report.refinement_radius = final_step;
  report.coarse_min_gap = *std::min_element(gaps.begin(), gaps.end());
  std::stable_sort(refined.begin(), refined.end(), [](const Evaluated& a, const Evaluated& b) { return a.gap < b.gap; });
  for (const auto& e : refined) {
    const bool duplicate = std::any_of(report.nodes.begin(), report.nodes.end(),
                                       [&](const Node& n) { return periodic_distance(n.k, e.k) < coarse_step; });
    if (duplicate) continue;
    Node node;
    node.k = e.k;
    node.gap = e.gap;
    node.degenerate = e.gap < kNumericPolicy.node_gap_tol;
    const auto levels = eig_hermitian(model.hamiltonian(e.k)).eigenvalues;
    const std::size_t half = levels.size() / 2;
    const double mid = 0.5 * (levels[half] + levels[half - 1]);
    for (double x : levels)
      if (std::abs(x - mid) < kNumericPolicy.node_gap_tol) ++node.multiplicity;
    report.nodes.push_back(node);
  }
  return report;
}

NodeReport locate_nodes(const TwoBandBloch& model, const MomentumGrid& grid, const NodeOptions& options) {
  return locate_nodes(as_multiband(model), grid, options);
}

}  // namespace dgprobe
