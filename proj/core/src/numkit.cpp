#include "dgprobe/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace dgprobe {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw InvalidInput("ComplexMatrix: entry count does not match rows*cols");
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InvalidInput("ComplexMatrix: ragged initializer");
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

std::vector<cplx> ComplexMatrix::column(std::size_t j) const {
  std::vector<cplx> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

ComplexMatrix ComplexMatrix::select_columns(std::span<const std::size_t> which) const {
  ComplexMatrix m(rows_, which.size());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t c = 0; c < which.size(); ++c) m(i, c) = (*this)(i, which[c]);
  }
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  }
  return m;
}

double ComplexMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& z : entries_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (const auto& z : entries_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::hermiticity_violation() const noexcept {
  if (!square()) return std::numeric_limits<double>::infinity();
  double v = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = i; j < cols_; ++j) {
      v = std::max(v, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    }
  }
  return v;
}

bool ComplexMatrix::is_hermitian(double tol) const noexcept {
  return hermiticity_violation() <= tol * std::max(1.0, max_abs());
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw InvalidInput("matrix sum: shape mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw InvalidInput("matrix difference: shape mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& z : entries_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols_ != b.rows_) throw InvalidInput("matrix product: inner dimensions differ");
  ComplexMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      const cplx* brow = b.entries_.data() + k * b.cols_;
      cplx* crow = c.entries_.data() + i * c.cols_;
      for (std::size_t j = 0; j < b.cols_; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
  return k;
}

std::vector<cplx> multiply(const ComplexMatrix& a, std::span<const cplx> x) {
  if (a.cols() != x.size()) throw InvalidInput("matrix-vector product: dimension mismatch");
  std::vector<cplx> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx s{};
    const auto r = a.row(i);
    for (std::size_t j = 0; j < x.size(); ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm2(std::span<const cplx> a) { return std::sqrt(std::real(inner(a, a))); }

void require_hermitian(const ComplexMatrix& a, const std::string& what) {
  if (!a.square()) {
    std::ostringstream os;
    os << what << ": matrix is " << a.rows() << "x" << a.cols() << ", expected square";
    throw InvalidInput(os.str());
  }
  if (!a.is_hermitian()) {
    std::ostringstream os;
    os << what << ": matrix is not Hermitian (max |A_ij - conj(A_ji)| = " << a.hermiticity_violation()
       << ", allowed " << kNumericPolicy.hermitian_tol * std::max(1.0, a.max_abs()) << ")";
    throw InvalidInput(os.str());
  }
}

namespace {

double off_diagonal_norm(const std::vector<cplx>& a, std::size_t n) {
  double s = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) s += std::norm(a[p * n + q]);
  return std::sqrt(2.0 * s);
}

}  // namespace

EigenSystem eig_hermitian(const ComplexMatrix& input) {
  require_hermitian(input, "eig_hermitian");
  const std::size_t n = input.rows();

  // Work on the symmetrized copy so the tolerance-level asymmetry of the
  // input does not leak into the rotations.
  std::vector<cplx> a(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i * n + i] = std::real(input(i, i));
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx z = 0.5 * (input(i, j) + std::conj(input(j, i)));
      a[i * n + j] = z;
      a[j * n + i] = std::conj(z);
    }
  }
  // w holds the eigenvectors as rows: w[p*n + k] = V(k, p).
  std::vector<cplx> w(n * n);
  for (std::size_t i = 0; i < n; ++i) w[i * n + i] = 1.0;

  const double scale = input.frobenius_norm();
  const double target = kNumericPolicy.jacobi_rel_tol * scale;

  for (int sweep = 0; sweep < kNumericPolicy.jacobi_max_sweeps; ++sweep) {
    const double off = off_diagonal_norm(a, n);
    if (off == 0.0 || off <= target) break;
    // Early sweeps skip elements that are small compared to the average.
    const double threshold = sweep < 3 ? 0.2 * off / static_cast<double>(n * n) : 0.0;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx g = a[p * n + q];
        const double ag = std::abs(g);
        if (ag == 0.0 || ag <= threshold) continue;
        const double app = std::real(a[p * n + p]);
        const double aqq = std::real(a[q * n + q]);
        if (sweep > 3 && std::abs(app) + 1e3 * ag == std::abs(app) &&
            std::abs(aqq) + 1e3 * ag == std::abs(aqq)) {
          a[p * n + q] = 0.0;
          a[q * n + p] = 0.0;
          continue;
        }
        const cplx phase_bar = std::conj(g) / ag;
        const double theta = (aqq - app) / (2.0 * ag);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // J = diag(1, conj(g)/|g|) * [[c, s], [-s, c]] restricted to (p, q).
        const cplx jpp = c, jpq = s, jqp = -s * phase_bar, jqq = c * phase_bar;

        // Rows p and q of A <- J^dagger A.
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a[p * n + k];
          const cplx aqk = a[q * n + k];
          a[p * n + k] = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a[q * n + k] = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        // Columns follow from Hermiticity of J^dagger A J.
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          a[k * n + p] = std::conj(a[p * n + k]);
          a[k * n + q] = std::conj(a[q * n + k]);
        }
        a[p * n + p] = app - t * ag;
        a[q * n + q] = aqq + t * ag;
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;

        for (std::size_t k = 0; k < n; ++k) {
          const cplx wp = w[p * n + k];
          const cplx wq = w[q * n + k];
          w[p * n + k] = wp * jpp + wq * jqp;
          w[q * n + k] = wp * jpq + wq * jqq;
        }
      }
    }
  }

  // Rotation round-off accumulates in the vectors; two Gram-Schmidt passes
  // restore orthonormality to machine precision.
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t p = 0; p < n; ++p) {
      cplx* wp = &w[p * n];
      for (std::size_t q = 0; q < p; ++q) {
        const cplx* wq = &w[q * n];
        cplx proj{};
        for (std::size_t k = 0; k < n; ++k) proj += std::conj(wq[k]) * wp[k];
        for (std::size_t k = 0; k < n; ++k) wp[k] -= proj * wq[k];
      }
      double norm = 0.0;
      for (std::size_t k = 0; k < n; ++k) norm += std::norm(wp[k]);
      norm = std::sqrt(norm);
      for (std::size_t k = 0; k < n; ++k) wp[k] /= norm;
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::real(a[i * n + i]) < std::real(a[j * n + j]);
  });

  EigenSystem out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    out.eigenvalues[c] = std::real(a[src * n + src]);
    for (std::size_t k = 0; k < n; ++k) out.eigenvectors(k, c) = w[src * n + k];
  }
  return out;
}

ComplexMatrix evolve_unitary(const EigenSystem& eig, double t) {
  const std::size_t n = eig.size();
  const ComplexMatrix& v = eig.eigenvectors;
  std::vector<cplx> phase(n);
  for (std::size_t i = 0; i < n; ++i) phase[i] = std::polar(1.0, -eig.eigenvalues[i] * t);
  ComplexMatrix u(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cplx s{};
      for (std::size_t m = 0; m < n; ++m) s += v(i, m) * phase[m] * std::conj(v(j, m));
      u(i, j) = s;
    }
  }
  return u;
}

ComplexMatrix evolve_unitary(const ComplexMatrix& a, double t) { return evolve_unitary(eig_hermitian(a), t); }

cplx det_complex(const ComplexMatrix& input) {
  if (!input.square()) throw InvalidInput("det_complex: matrix is not square");
  const std::size_t n = input.rows();
  ComplexMatrix lu = input;
  cplx det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(lu(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(lu(r, col)) > best) {
        best = std::abs(lu(r, col));
        pivot = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(pivot, j), lu(col, j));
      det = -det;
    }
    const cplx d = lu(col, col);
    det *= d;
    for (std::size_t r = col + 1; r < n; ++r) {
      const cplx f = lu(r, col) / d;
      if (f == cplx{}) continue;
      for (std::size_t j = col + 1; j < n; ++j) lu(r, j) -= f * lu(col, j);
    }
  }
  return det;
}

}  // namespace dgprobe
