// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <dgprobe/analysis.hpp>
#include <dgprobe/parallel.hpp>

#include "cli.hpp"

using namespace dgprobe;

namespace {

constexpr double kPi = std::numbers::pi;

unsigned worker_count() { return std::max(1u, std::min(8u, std::thread::hardware_concurrency())); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double distance(const Momentum& a, const Momentum& b) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double d = std::remainder(a[i] - b[i], 2 * kPi);
    s += d * d;
  }
  return std::sqrt(s);
}

// 1
Outcome closed_form_equivalence() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> k(-kPi, kPi), phi(-1.0, 1.0), mass(-5.0, 1.0), delta(0.01, 0.5),
      time(0.0, 20.0);
  double worst = 0.0;
  int samples = 0;
  while (samples < 1000) {
    const TwoBandBloch model = samples % 2 ? qwz_bloch(mass(rng)) : ssh_bloch(phi(rng));
    const Momentum q{k(rng), model.dimension == 2 ? k(rng) : 0.0, 0.0};
    const FourVector r = model.at(q);
    if (r.magnitude() <= 1e-3) continue;
    const double d = delta(rng), t = time(rng);
    const cplx exact = lk_exact(model.hamiltonian(q), model.perturbation(), d, t).value;
    worst = std::max(worst, std::abs(lk_closed_form(r, d, t) - exact));
    ++samples;
  }
  return {worst <= 1e-10, fmt("max |closed - exact| = %.2e over %d samples", worst, samples)};
}

// 2
Outcome ssh_cusp() {
  ModelFamily family = std::function<TwoBandBloch(double)>([](double phi) { return ssh_bloch(phi); });
  const auto values = linspace(-1.0, 1.0, 101);
  SweepOptions options;
  options.threads = worker_count();
  const auto r = sweep_parameter("phi", family, values, MomentumGrid::uniform(1, 200), 0.1, default_time_grid(),
                                 options);
  std::string found;
  for (auto i : r.cusps) found += fmt(" %g", r.grid[i]);
  const double step = values[1] - values[0];
  const bool pass = r.cusps.size() == 1 && std::abs(r.grid[r.cusps[0]]) <= step + 1e-12;
  return {pass, "cusps at phi =" + (found.empty() ? std::string(" (none)") : found)};
}

// 3
Outcome ssh_degenerate_law() {
  const MomentumEcho echo(ssh_bloch(0.0), {kPi, 0, 0}, 0.1);
  double worst = 0.0;
  for (double t : linspace(0.0, 20.0, 100)) {
    const double c = std::cos(0.1 * t);
    worst = std::max(worst, std::abs(std::norm(echo(t)) - c * c));
  }
  const bool directional = echo.choice() == OrbitalChoice::DirectionalLimit;
  return {worst <= 1e-10 && directional,
          fmt("max ||L|^2 - cos^2(0.1 t)| = %.2e, directional limit: %s", worst, directional ? "yes" : "no")};
}

// 4
Outcome qwz_cusps() {
  ModelFamily family = std::function<TwoBandBloch(double)>([](double m) { return qwz_bloch(m); });
  const auto values = linspace(-5.0, 1.0, 121);
  SweepOptions options;
  options.threads = worker_count();
  const auto r = sweep_parameter("M", family, values, MomentumGrid::uniform(2, 100), 0.1, default_time_grid(),
                                 options);
  const double step = values[1] - values[0];
  std::string found;
  for (auto i : r.cusps) found += fmt(" %g", r.grid[i]);
  bool pass = true;
  for (double target : {0.0, -2.0, -4.0}) {
    const bool hit = std::any_of(r.cusps.begin(), r.cusps.end(),
                                 [&](std::size_t i) { return std::abs(r.grid[i] - target) <= step + 1e-12; });
    pass = pass && hit;
  }
  return {pass, "cusps at M =" + (found.empty() ? std::string(" (none)") : found)};
}

// 5
Outcome qwz_nodes() {
  struct Case {
    double mass;
    std::vector<Momentum> expected;
  };
  const std::vector<Case> cases{{0.0, {{0, 0, 0}}},
                                {-2.0, {{kPi, 0, 0}, {0, kPi, 0}}},
                                {-4.0, {{kPi, kPi, 0}}},
                                {1.0, {}}};
  NodeOptions options;
  options.threads = worker_count();
  bool pass = true;
  std::string detail;
  for (const auto& c : cases) {
    const auto rep = locate_nodes(qwz_bloch(c.mass), MomentumGrid::uniform(2, 40), options);
    std::vector<Momentum> found;
    for (const auto& n : rep.nodes)
      if (n.gap < 1e-6) found.push_back(n.k);
    bool ok = found.size() == c.expected.size();
    for (const auto& e : c.expected)
      ok = ok && std::any_of(found.begin(), found.end(), [&](const Momentum& f) { return distance(f, e) < 1e-6; });
    pass = pass && ok;
    detail += fmt("M=%g: %zu node(s)%s; ", c.mass, found.size(), ok ? "" : " MISMATCH");
  }
  return {pass, detail};
}

// 6
Outcome chern_plateaus() {
  const std::vector<std::pair<double, int>> cases{{1.0, 0}, {-1.0, -1}, {-3.0, 1}, {-5.0, 0}};
  bool pass = true;
  std::string detail;
  for (auto [mass, expected] : cases) {
    const auto c = chern_number(qwz_bloch(mass), 40);
    pass = pass && c.value == expected && c.residue < 0.01;
    detail += fmt("M=%g: C=%d (residue %.1e); ", mass, c.value, c.residue);
  }
  return {pass, detail};
}

// 7
Outcome zak_quantization() {
  bool pass = true;
  double worst = 0.0;
  for (double phi : {-0.9, -0.5, -0.1, 0.1, 0.5, 0.9}) {
    const ZakPhase z = zak_phase(ssh_bloch(phi), 256);
    const double expected = phi < 0 ? kPi : 0.0;
    const double err_value = std::abs(z.value - expected);
    const double err_raw = std::abs(std::remainder(z.raw - expected, 2 * kPi));
    worst = std::max({worst, err_value, err_raw});
    pass = pass && err_value <= 1e-6 && err_raw <= 1e-6;
  }
  return {pass, fmt("max deviation from {0, pi} (snapped and raw) = %.2e", worst)};
}

// 8
Outcome product_realspace() {
  const auto times = linspace(0.0, 10.0, 50);
  double worst_ssh = 0.0, worst_qwz = 0.0;
  for (double phi : {0.3, -0.6}) {
    const auto a = product_series(ssh_bloch(phi), MomentumGrid::uniform(1, 8), 0.1, times);
    const auto b = realspace_series(ssh_chain(16, phi, Boundary::Periodic), 0.1, times);
    for (std::size_t i = 0; i < times.size(); ++i)
      worst_ssh = std::max(worst_ssh, std::abs(std::sqrt(a.modsq(i)) - std::abs(b.values[i])));
  }
  for (double mass : {1.0, -1.0, -3.0}) {
    const auto a = product_series(qwz_bloch(mass), MomentumGrid::uniform(2, 4), 0.1, times);
    const auto b = realspace_series(qwz_torus(4, 4, mass), 0.1, times);
    for (std::size_t i = 0; i < times.size(); ++i)
      worst_qwz = std::max(worst_qwz, std::abs(std::sqrt(a.modsq(i)) - std::abs(b.values[i])));
  }
  return {worst_ssh <= 1e-8 && worst_qwz <= 1e-8,
          fmt("SSH N=8: %.2e, QWZ 4x4 (M=1,-1,-3): %.2e", worst_ssh, worst_qwz)};
}

// 9
Outcome open_ssh_edges() {
  const auto chain = ssh_open_chain(200, 0.5);
  const auto eig = eig_hermitian(chain.h);
  const auto loc = edge_localization(eig, chain.geometry);
  std::size_t zero = 0;
  double weakest = 1.0;
  for (std::size_t i = 0; i < eig.size(); ++i) {
    if (std::abs(eig.eigenvalues[i]) < 1e-3) {
      ++zero;
      weakest = std::min(weakest, loc[i].edge_weight());
    }
  }
  return {zero == 2 && weakest > 0.9, fmt("%zu states with |E| < 1e-3, smallest edge weight %.4f", zero, weakest)};
}

// 10
Outcome weyl_regimes() {
  NodeOptions options;
  options.threads = worker_count();
  const auto grid = MomentumGrid::uniform(3, 40);

  const auto a = locate_nodes(weyl_bloch({}), grid, options);
  const bool a_ok = a.degenerate_count() == 1 && distance(a.nodes[0].k, {0, 0, 0}) < 1e-6 &&
                    a.nodes[0].multiplicity >= 2;

  WeylParameters pb;
  pb.b3 = 1.8;
  const auto b = locate_nodes(weyl_bloch(pb), grid, options);
  const bool b_ok = b.degenerate_count() == 2;

  WeylParameters pd;
  pd.epsilon = 5.5;
  pd.b0 = 1.4;
  const auto d = locate_nodes(weyl_bloch(pd), grid, options);
  const double d_gap = min_grid_gap(weyl_bloch(pd), grid, options.threads);
  const bool d_ok = d.degenerate_count() == 0 && d_gap > 0.0;

  return {a_ok && b_ok && d_ok,
          fmt("(a) %zu node(s), multiplicity %zu at Gamma; (b) %zu nodes; (d) %zu nodes, min grid gap %.4f",
              a.degenerate_count(), a.nodes.empty() ? std::size_t{0} : a.nodes[0].multiplicity,
              b.degenerate_count(), d.degenerate_count(), d_gap)};
}

// 11
Outcome weyl_path() {
  const std::vector<PathVertex> path{
      {"Z", {kPi, 0, kPi}}, {"G", {0, 0, 0}}, {"M", {0, 0, kPi}}, {"Z", {kPi, 0, kPi}}};
  const auto a = momentum_path_scan(weyl_bloch({}), path, 100, 0.5, 20.0);
  double near_gamma = 1.0;
  for (std::size_t i = 0; i < a.lk2.size(); ++i)
    if (distance(a.momenta[i], {0, 0, 0}) < 0.5) near_gamma = std::min(near_gamma, a.lk2[i]);

  WeylParameters pd;
  pd.epsilon = 5.5;
  pd.b0 = 1.4;
  const auto d = momentum_path_scan(weyl_bloch(pd), path, 100, 0.5, 20.0);
  double gapped_min = 1.0;
  Momentum at{};
  for (std::size_t i = 0; i < d.lk2.size(); ++i) {
    const auto& e = d.bands[i];
    const bool gapped = e[2] - e[1] > 1e-6;
    if (gapped && d.lk2[i] < gapped_min) {
      gapped_min = d.lk2[i];
      at = d.momenta[i];
    }
  }
  return {near_gamma < 0.1 && gapped_min >= 0.5,
          fmt("(a) min near Gamma %.4f (need < 0.1); (d) min on gapped path %.4f at (%.3f, %.3f, %.3f) (need >= 0.5)",
              near_gamma, gapped_min, at[0], at[1], at[2])};
}

// 12
Outcome km_crossing() {
  const RibbonModel ribbon = km_ribbon(8, KaneMeleParameters{});
  const std::size_t n = ribbon.dimension(), points = 100;
  std::vector<double> ky(points), gap(points), lk2(points);
  const std::vector<double> snapshot{20.0};
  parallel_for(points, worker_count(), [&](std::size_t m) {
    ky[m] = 2 * kPi * static_cast<double>(m) / static_cast<double>(points);
    const auto e = eig_hermitian(ribbon.h_of_k(ky[m])).eigenvalues;
    gap[m] = e[n / 2] - e[n / 2 - 1];
    lk2[m] = realspace_series(ribbon.at(ky[m]), 0.1, snapshot).modsq(0);
  });
  std::vector<std::size_t> order(points);
  for (std::size_t i = 0; i < points; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return gap[x] < gap[y]; });
  const std::size_t c1 = order[0], c2 = order[1];
  const bool opposite = (ky[c1] - kPi) * (ky[c2] - kPi) < 0.0;

  // Gapped reference: momenta whose gap exceeds ten times the larger crossing gap.
  const double crossing = std::max(lk2[c1], lk2[c2]);
  double lo = 1.0, hi = 0.0;
  for (std::size_t m = 0; m < points; ++m) {
    if (gap[m] <= 10.0 * gap[c2]) continue;
    lo = std::min(lo, lk2[m]);
    hi = std::max(hi, lk2[m]);
  }
  const double ratio = std::max(hi / std::min(lk2[c1], lk2[c2]), crossing / lo);
  return {opposite && ratio >= 2.0,
          fmt("smallest gaps at ky/pi = %.2f, %.2f (%s pi); |L|^2 there %.4f, %.4f; gapped range [%.4f, %.4f]; "
              "largest ratio %.3f (need >= 2)",
              ky[c1] / kPi, ky[c2] / kPi, opposite ? "straddle" : "do not straddle", lk2[c1], lk2[c2], lo, hi,
              ratio)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

// 13
Outcome universal_properties() {
  double max_modulus = 0.0, l0_err = 0.0, still_err = 0.0;
  auto record = [&](const std::function<cplx(double)>& l, const std::function<cplx(double)>& still) {
    l0_err = std::max(l0_err, std::abs(l(0.0) - 1.0));
    for (double t = 0.0; t <= 40.0; t += 0.25) {
      max_modulus = std::max(max_modulus, std::abs(l(t)));
      still_err = std::max(still_err, std::abs(std::abs(still(t)) - 1.0));
    }
  };

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> k(-kPi, kPi), delta(0.01, 1.0);
  WeylParameters pb;
  pb.b3 = 1.8;
  for (int i = 0; i < 200; ++i) {
    const Momentum q{k(rng), k(rng), k(rng)};
    const double d = delta(rng);
    const auto ssh = ssh_bloch(k(rng) / kPi);
    const auto qwz = qwz_bloch(k(rng) * 1.5 - 2.0);
    const auto weyl = weyl_bloch(i % 2 ? WeylParameters{} : pb);
    const MomentumEcho s(ssh, q, d), s0(ssh, q, 0.0), c(qwz, q, d), c0(qwz, q, 0.0), w(weyl, q, d), w0(weyl, q, 0.0);
    record(s, s0);
    record(c, c0);
    record(w, w0);
  }
  // Degenerate momenta go through the directional limit.
  for (const auto& [model, q] : std::vector<std::pair<TwoBandBloch, Momentum>>{
           {ssh_bloch(0.0), {kPi, 0, 0}}, {qwz_bloch(-2.0), {kPi, 0, 0}}, {qwz_bloch(0.0), {0, 0, 0}}}) {
    const MomentumEcho e(model, q, 0.3), e0(model, q, 0.0);
    record(e, e0);
  }
  const std::vector<double> times = linspace(0.0, 40.0, 161);
  for (const LatticeModel& lattice :
       {ssh_open_chain(40, 0.5), ssh_chain(24, -0.3, Boundary::Periodic), qwz_torus(4, 4, -1.0),
        km_ribbon(4, KaneMeleParameters{}).at(0.97 * kPi), qwz_strip(8, 0.0).at(0.1)}) {
    const auto s = realspace_series(lattice, 0.2, times);
    const auto s0 = realspace_series(lattice, 0.0, times);
    l0_err = std::max(l0_err, std::abs(s.values[0] - 1.0));
    for (std::size_t i = 0; i < times.size(); ++i) {
      max_modulus = std::max(max_modulus, std::abs(s.values[i]));
      still_err = std::max(still_err, std::abs(std::abs(s0.values[i]) - 1.0));
    }
  }

  // Byte-identical CLI outputs across repeats and thread counts.
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(DGPROBE_TEST_TMP);
  fs::remove_all(dir);
  const std::vector<std::vector<std::string>> runs{
      {"sweep", "--preset", "fig1", "--set", "scan.points=41"},
      {"kmap", "--preset", "fig3", "--set", "grid=[40,40]"},
      {"series", "--preset", "fig3", "--set", "scan=null", "--set", "params.M=-1"},
      {"nodes", "--preset", "fig5b", "--set", "grid=[16,16,16]"},
      {"path", "--preset", "fig7", "--set", "samples=30"},
      {"kmap", "--preset", "km", "--set", "grid=[24]"},
      {"topo", "--preset", "fig3", "--set", "grid=[24,24]", "--set", "scan.points=13"},
  };
  std::size_t identical = 0, compared = 0;
  std::string differing;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    std::vector<std::string> files;
    for (const char* threads : {"1", "1", "4"}) {
      for (const char* format : {"csv", "json"}) {
        auto args = runs[r];
        const fs::path out = dir / fmt("run%zu_j%s_%zu.%s", r, threads, files.size(), format);
        args.insert(args.end(), {"-j", threads, "-f", format, "-o", out.string()});
        std::ostringstream sink, err;
        if (dgprobe::cli::run(args, sink, err) != 0) return {false, "CLI run failed: " + err.str()};
        files.push_back(slurp(out));
      }
    }
    for (std::size_t f = 2; f < files.size(); ++f) {
      ++compared;
      if (files[f] == files[f % 2]) {
        ++identical;
      } else {
        differing += " " + runs[r][0];
      }
    }
  }

  const bool pass = max_modulus <= 1.0 + 1e-9 && l0_err <= 1e-12 && still_err <= 1e-12 && identical == compared;
  return {pass, fmt("max |L| = %.15f, max |L(0) - 1| = %.1e, max ||L_delta=0| - 1| = %.1e, "
                    "CLI outputs identical %zu/%zu%s",
                    max_modulus, l0_err, still_err, identical, compared, differing.c_str())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"closed form equals exact diagonalization", closed_form_equivalence},
      {"SSH sweep has a unique cusp at phi = 0", ssh_cusp},
      {"SSH degenerate momentum follows cos^2(delta t)", ssh_degenerate_law},
      {"QWZ sweep has cusps at M = 0, -2, -4", qwz_cusps},
      {"QWZ node momenta", qwz_nodes},
      {"QWZ Chern plateaus", chern_plateaus},
      {"SSH Zak phase quantization", zak_quantization},
      {"momentum product equals real-space overlap", product_realspace},
      {"open SSH chain has two edge states", open_ssh_edges},
      {"Weyl regimes (a), (b), (d)", weyl_regimes},
      {"Weyl path: decay near Gamma in (a), none on gapped path in (d)", weyl_path},
      {"Kane-Mele ribbon crossings straddle ky = pi with contrasting |L|^2", km_crossing},
      {"bounds, L(0) = 1, delta = 0, reproducible outputs", universal_properties},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s %2zu  %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
