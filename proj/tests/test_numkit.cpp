#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "dgprobe/models.hpp"
#include "dgprobe/numkit.hpp"

using namespace dgprobe;

namespace {

ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = g(rng);
    for (std::size_t j = i + 1; j < n; ++j) {
      a(i, j) = cplx(g(rng), g(rng));
      a(j, i) = std::conj(a(i, j));
    }
  }
  return a;
}

double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

// Permutation expansion; only for small n.
cplx leibniz_det(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  cplx total{};
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (p[i] > p[j]) ++inversions;
    cplx term = inversions % 2 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) term *= a(i, p[i]);
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

}  // namespace

TEST_CASE("pauli matrices have eigenvalues -1 and +1") {
  for (const auto& s : {pauli_x(), pauli_y(), pauli_z()}) {
    const auto e = eig_hermitian(s);
    CHECK(e.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(e.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(max_diff(pauli_x() * pauli_y(), pauli_z() * cplx(0, 1)) < 1e-15);
}

TEST_CASE("eigendecomposition reconstructs random hermitian matrices") {
  std::mt19937_64 rng(7);
  for (std::size_t n : {1u, 2u, 5u, 8u, 24u}) {
    const ComplexMatrix a = random_hermitian(n, rng);
    const EigenSystem e = eig_hermitian(a);
    const ComplexMatrix& v = e.eigenvectors;
    const ComplexMatrix rebuilt = v * ComplexMatrix::diagonal(e.eigenvalues) * v.adjoint();
    CHECK(max_diff(rebuilt, a) < 1e-12 * std::max(1.0, a.max_abs()) * n);
    CHECK(max_diff(v.adjoint() * v, ComplexMatrix::identity(n)) < 1e-13);
    for (std::size_t i = 1; i < n; ++i) CHECK(e.eigenvalues[i - 1] <= e.eigenvalues[i]);
    for (std::size_t c = 0; c < n; ++c) {
      const auto col = v.column(c);
      auto av = multiply(a, col);
      for (std::size_t i = 0; i < n; ++i) av[i] -= e.eigenvalues[c] * col[i];
      CHECK(norm2(av) < 1e-12 * std::max(1.0, a.frobenius_norm()));
    }
  }
}

TEST_CASE("degenerate spectrum keeps an orthonormal eigenbasis") {
  std::vector<double> d{1.0, 1.0, 1.0, -2.0, -2.0, 3.0};
  std::mt19937_64 rng(11);
  const auto q = eig_hermitian(random_hermitian(6, rng)).eigenvectors;
  const ComplexMatrix a = q * ComplexMatrix::diagonal(d) * q.adjoint();
  const auto e = eig_hermitian(a);
  CHECK(e.eigenvalues[0] == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(e.eigenvalues[5] == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(max_diff(e.eigenvectors.adjoint() * e.eigenvectors, ComplexMatrix::identity(6)) < 1e-13);
}

TEST_CASE("evolution operator matches a Taylor series and composes") {
  std::mt19937_64 rng(3);
  const ComplexMatrix a = random_hermitian(6, rng);
  const double t = 0.37;
  ComplexMatrix term = ComplexMatrix::identity(6), series = ComplexMatrix::identity(6);
  for (int k = 1; k < 60; ++k) {
    term = term * a * cplx(0.0, -t / k);
    series += term;
  }
  CHECK(max_diff(evolve_unitary(a, t), series) < 1e-12);

  const auto e = eig_hermitian(a);
  CHECK(max_diff(evolve_unitary(e, 0.3) * evolve_unitary(e, 0.9), evolve_unitary(e, 1.2)) < 1e-12);
  const ComplexMatrix u = evolve_unitary(e, 5.0);
  CHECK(max_diff(u.adjoint() * u, ComplexMatrix::identity(6)) < 1e-12);
  CHECK(max_diff(evolve_unitary(e, 0.0), ComplexMatrix::identity(6)) < 1e-13);
}

TEST_CASE("determinant agrees with the permutation expansion") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (std::size_t n : {1u, 2u, 3u, 5u, 6u}) {
    ComplexMatrix a(n, n);
    for (auto& z : a.entries()) z = cplx(g(rng), g(rng));
    const cplx ref = leibniz_det(a);
    CHECK(std::abs(det_complex(a) - ref) < 1e-11 * std::max(1.0, std::abs(ref)));
  }
  ComplexMatrix singular{{1.0, 2.0}, {2.0, 4.0}};
  CHECK(std::abs(det_complex(singular)) < 1e-15);
  CHECK(std::abs(det_complex(ComplexMatrix(0, 0)) - 1.0) < 1e-15);
}

TEST_CASE("determinant of a unitary evolution is exp(-i t tr A)") {
  std::mt19937_64 rng(9);
  const ComplexMatrix a = random_hermitian(7, rng);
  double trace = 0.0;
  for (std::size_t i = 0; i < 7; ++i) trace += std::real(a(i, i));
  const cplx d = det_complex(evolve_unitary(a, 1.3));
  CHECK(std::abs(d - std::polar(1.0, -1.3 * trace)) < 1e-11);
}

TEST_CASE("projector onto an eigenspace is basis independent") {
  std::mt19937_64 rng(13);
  const ComplexMatrix a = random_hermitian(6, rng);
  const auto e = eig_hermitian(a);
  const std::vector<std::size_t> low{0, 1, 2};
  const ComplexMatrix phi = e.eigenvectors.select_columns(low);
  const ComplexMatrix p = phi * phi.adjoint();
  const auto e2 = eig_hermitian(a * cplx(2.0) + ComplexMatrix::identity(6));
  const ComplexMatrix phi2 = e2.eigenvectors.select_columns(low);
  CHECK(max_diff(p, phi2 * phi2.adjoint()) < 1e-12);
  CHECK(max_diff(p * p, p) < 1e-12);
}

TEST_CASE("invalid inputs are rejected with a measured violation") {
  ComplexMatrix rect(2, 3);
  CHECK_THROWS_AS(eig_hermitian(rect), InvalidInput);
  CHECK_THROWS_AS(det_complex(rect), InvalidInput);

  ComplexMatrix skew{{1.0, 0.5}, {0.2, 1.0}};
  try {
    eig_hermitian(skew);
    FAIL("expected InvalidInput");
  } catch (const InvalidInput& e) {
    const std::string msg = e.what();
    CHECK(msg.find("not Hermitian") != std::string::npos);
    CHECK(msg.find("0.3") != std::string::npos);
  }
  CHECK_THROWS_AS(ComplexMatrix(2, 2, std::vector<cplx>(3)), InvalidInput);
  CHECK_THROWS_AS(ComplexMatrix(2, 2) * ComplexMatrix(3, 3), InvalidInput);
}

TEST_CASE("kron and hermiticity helpers") {
  const ComplexMatrix k = kron(pauli_x(), pauli_z());
  CHECK(k.rows() == 4);
  CHECK(k(0, 2) == cplx(1.0));
  CHECK(k(1, 3) == cplx(-1.0));
  CHECK(k.is_hermitian());
  CHECK(std::abs(inner(std::vector<cplx>{1.0, cplx(0, 1)}, std::vector<cplx>{1.0, cplx(0, 1)}) - 2.0) < 1e-15);
}
