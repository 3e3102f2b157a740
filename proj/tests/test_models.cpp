#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dgprobe/models.hpp"

using namespace dgprobe;

namespace {

constexpr double kPi = std::numbers::pi;

double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("ssh bloch vector") {
  const auto m = ssh_bloch(0.3);
  for (double k : {-2.0, -0.4, 0.0, 1.1, 3.0}) {
    const FourVector r = m.at({k, 0, 0});
    CHECK(r.rx == doctest::Approx(-1.3 - 0.7 * std::cos(k)));
    CHECK(r.ry == doctest::Approx(-0.7 * std::sin(k)));
    CHECK(r.rz == 0.0);
    const double expect = std::sqrt(1.3 * 1.3 + 0.7 * 0.7 + 2.0 * 1.3 * 0.7 * std::cos(k));
    CHECK(r.magnitude() == doctest::Approx(expect).epsilon(1e-14));
  }
  CHECK(ssh_bloch(0.0).at({kPi, 0, 0}).magnitude() < 1e-15);
  CHECK(ssh_bloch(0.3).warnings.empty());
  CHECK_FALSE(ssh_bloch(1.5).warnings.empty());
}

TEST_CASE("qwz bloch vector and gap closings") {
  const auto m = qwz_bloch(-1.0);
  const FourVector r = m.at({0.4, -0.9, 0});
  CHECK(r.rx == doctest::Approx(std::sin(0.4)));
  CHECK(r.ry == doctest::Approx(std::sin(-0.9)));
  CHECK(r.rz == doctest::Approx(1.0 - std::cos(0.4) - std::cos(-0.9)));
  CHECK(qwz_bloch(0.0).at({0, 0, 0}).magnitude() < 1e-15);
  CHECK(qwz_bloch(-2.0).at({kPi, 0, 0}).magnitude() < 1e-15);
  CHECK(qwz_bloch(-2.0).at({0, kPi, 0}).magnitude() < 1e-15);
  CHECK(qwz_bloch(-4.0).at({kPi, kPi, 0}).magnitude() < 1e-15);
}

TEST_CASE("bloch hamiltonians are periodic and hermitian") {
  const auto q = qwz_bloch(-1.3);
  const auto w = weyl_bloch({});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int i = 0; i < 20; ++i) {
    const Momentum k{u(rng), u(rng), u(rng)};
    const Momentum kx{k[0] + 2 * kPi, k[1], k[2]};
    const Momentum kz{k[0], k[1], k[2] - 2 * kPi};
    CHECK(max_diff(q.hamiltonian(k), q.hamiltonian(kx)) < 1e-13);
    CHECK(max_diff(w.hamiltonian(k), w.hamiltonian(kz)) < 1e-13);
    CHECK(w.hamiltonian(k).is_hermitian());
  }
  CHECK(max_diff(w.perturbation(), kron(pauli_z(), pauli_0())) == 0.0);
}

TEST_CASE("weyl model at the zone centre") {
  // epsilon - 6t vanishes for the default parameters: H(0) = 0.
  const auto h = weyl_bloch({}).hamiltonian({0, 0, 0});
  CHECK(h.max_abs() < 1e-15);

  WeylParameters p;
  p.b3 = 1.8;
  const auto e = eig_hermitian(weyl_bloch(p).hamiltonian({0, 0, 0})).eigenvalues;
  CHECK(e[0] == doctest::Approx(-1.8));
  CHECK(e[3] == doctest::Approx(1.8));
}

TEST_CASE("two band model as multiband") {
  const auto two = qwz_bloch(-1.0);
  const auto multi = as_multiband(two);
  CHECK(multi.bands == 2);
  const Momentum k{0.3, 1.2, 0};
  CHECK(max_diff(multi.hamiltonian(k), two.hamiltonian(k)) == 0.0);
  CHECK(max_diff(multi.perturbation(), pauli_z()) == 0.0);
}

TEST_CASE("ssh chain structure") {
  const auto m = ssh_open_chain(6, 0.5);
  CHECK(m.h(0, 1) == cplx(-0.5));
  CHECK(m.h(1, 2) == cplx(-1.5));
  CHECK(m.h(4, 5) == cplx(-0.5));
  CHECK(m.h(5, 0) == cplx(0.0));
  CHECK(m.v(0, 0) == cplx(1.0));
  CHECK(m.v(1, 1) == cplx(-1.0));
  CHECK(m.geometry.open_max == 5.0);

  const auto ring = ssh_chain(6, 0.5, Boundary::Periodic);
  CHECK(ring.h(5, 0) == cplx(-1.5));

  CHECK_THROWS_AS(ssh_chain(7, 0.1, Boundary::Open), InvalidInput);
  CHECK_THROWS_AS(ssh_chain(2, 0.1, Boundary::Open), InvalidInput);
  CHECK_FALSE(ssh_chain(8, -1.2, Boundary::Open).warnings.empty());
}

TEST_CASE("periodic ssh ring spectrum equals the bloch bands") {
  const double phi = -0.4;
  const std::size_t cells = 6;
  const auto ring = eig_hermitian(ssh_chain(2 * cells, phi, Boundary::Periodic).h).eigenvalues;
  std::vector<double> bands;
  for (std::size_t m = 0; m < cells; ++m) {
    const double r = ssh_bloch(phi).at({2 * kPi * m / cells, 0, 0}).magnitude();
    bands.push_back(-r);
    bands.push_back(r);
  }
  std::sort(bands.begin(), bands.end());
  for (std::size_t i = 0; i < bands.size(); ++i) CHECK(ring[i] == doctest::Approx(bands[i]).epsilon(1e-12));
}

TEST_CASE("periodic qwz strip reproduces the bloch bands") {
  const double mass = -1.4, ky = 0.7;
  const std::size_t n = 5;
  const auto strip = qwz_strip(n, mass, Boundary::Periodic);
  const auto e = eig_hermitian(strip.h_of_k(ky)).eigenvalues;
  std::vector<double> bands;
  for (std::size_t m = 0; m < n; ++m) {
    const double r = qwz_bloch(mass).at({2 * kPi * m / n, ky, 0}).magnitude();
    bands.push_back(-r);
    bands.push_back(r);
  }
  std::sort(bands.begin(), bands.end());
  for (std::size_t i = 0; i < bands.size(); ++i) CHECK(e[i] == doctest::Approx(bands[i]).epsilon(1e-12));
  CHECK_THROWS_AS(qwz_strip(1, 0.0), InvalidInput);
}

TEST_CASE("qwz torus spectrum equals the bloch bands") {
  const double mass = -2.7;
  const auto torus = eig_hermitian(qwz_torus(3, 4, mass).h).eigenvalues;
  std::vector<double> bands;
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      const double r = qwz_bloch(mass).at({2 * kPi * a / 3, 2 * kPi * b / 4, 0}).magnitude();
      bands.push_back(-r);
      bands.push_back(r);
    }
  }
  std::sort(bands.begin(), bands.end());
  for (std::size_t i = 0; i < bands.size(); ++i) CHECK(torus[i] == doctest::Approx(bands[i]).epsilon(1e-12));
}

TEST_CASE("kane-mele ribbon geometry") {
  const auto sites = km_ribbon_sites(4);
  REQUIRE(sites.size() == 8);
  CHECK(sites[0].sublattice == 0);
  CHECK(sites[1].sublattice == 1);
  CHECK(sites[7].chain == 3);

  // Bulk sites have three nearest neighbours, the terminating sites two.
  std::vector<int> degree(8, 0);
  for (const auto& b : km_nearest_bonds(4)) {
    ++degree[b.from];
    CHECK(std::hypot(b.dx, b.dy) == doctest::Approx(1.0 / std::sqrt(3.0)));
  }
  CHECK(degree.front() == 2);
  CHECK(degree.back() == 2);
  for (std::size_t s = 1; s + 1 < 8; ++s) CHECK(degree[s] == 3);

  for (const auto& b : km_second_bonds(4)) {
    CHECK(std::hypot(b.dx, b.dy) == doctest::Approx(1.0));
    CHECK(std::abs(b.turn) == 1);
  }
}

TEST_CASE("kane-mele ribbon is hermitian and time-reversal paired") {
  const auto r = km_ribbon(4, KaneMeleParameters{});
  CHECK(r.dimension() == 16);
  for (double k : {0.0, 0.8, 2.0, kPi, 4.1}) {
    const auto h = r.h_of_k(k);
    CHECK(h.is_hermitian());
    const auto a = eig_hermitian(h).eigenvalues;
    const auto b = eig_hermitian(r.h_of_k(2 * kPi - k)).eigenvalues;
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
  }
  CHECK(max_diff(r.h_of_k(0.3), r.h_of_k(0.3 + 2 * kPi)) < 1e-13);
  CHECK(r.at(0.5).h.rows() == 16);
}

TEST_CASE("kane-mele without rashba and staggering has a bulk gap at the Dirac momentum") {
  // Wide ribbon, pure intrinsic spin-orbit coupling: bulk gap 6 sqrt(3) lambda_so
  // with helical edge modes inside it.
  const auto r = km_ribbon(30, KaneMeleParameters{0.06, 0.0, 0.0});
  const auto e = eig_hermitian(r.h_of_k(2 * kPi / 3)).eigenvalues;
  const std::size_t n = e.size();
  // Spin is conserved; every level is doubly degenerate at this momentum.
  for (std::size_t i = 0; i + 1 < n; i += 2) CHECK(e[i + 1] - e[i] < 1e-9);
  const double bulk_gap = 6.0 * std::sqrt(3.0) * 0.06;
  std::size_t inside = 0;
  for (double x : e) inside += std::abs(x) < 0.45 * bulk_gap ? 1 : 0;
  CHECK(inside <= 4);
}

TEST_CASE("kane-mele nearest-neighbour limit has a symmetric spectrum") {
  const auto r = km_ribbon(6, KaneMeleParameters{0.0, 0.0, 0.0});
  for (double k : {0.0, 1.0, 2.5, kPi}) {
    const auto e = eig_hermitian(r.h_of_k(k)).eigenvalues;
    for (std::size_t i = 0; i < e.size(); ++i) CHECK(e[i] == doctest::Approx(-e[e.size() - 1 - i]).epsilon(1e-12));
  }
}

TEST_CASE("kane-mele turn signs are antisymmetric") {
  const auto bonds = km_second_bonds(5);
  for (const auto& b : bonds) {
    const auto back = std::find_if(bonds.begin(), bonds.end(), [&](const KaneMeleBond& o) {
      return o.from == b.to && o.to == b.from && o.period_offset == -b.period_offset;
    });
    REQUIRE(back != bonds.end());
    CHECK(back->turn == -b.turn);
  }
}

TEST_CASE("kane-mele ribbon has two Fermi-level crossings next to ky = pi") {
  const auto r = km_ribbon(8, KaneMeleParameters{});
  const std::size_t n = r.dimension();
  std::vector<std::pair<double, double>> gaps;
  for (int m = 0; m < 100; ++m) {
    const double k = 2 * kPi * m / 100;
    const auto e = eig_hermitian(r.h_of_k(k)).eigenvalues;
    gaps.push_back({e[n / 2] - e[n / 2 - 1], k});
  }
  std::sort(gaps.begin(), gaps.end());
  CHECK((gaps[0].second - kPi) * (gaps[1].second - kPi) < 0.0);
  CHECK(std::abs(gaps[0].second - kPi) < 0.1 * kPi);
  CHECK(std::abs(gaps[1].second - kPi) < 0.1 * kPi);
}
