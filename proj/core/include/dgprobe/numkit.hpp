#pragma once

// Dense complex linear algebra for small Hermitian problems (d up to a few
// hundred): Jacobi eigensolver, unitary propagators, LU determinants.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dgprobe {

using cplx = std::complex<double>;

/// Every tolerance used by the library lives here. There is exactly one
/// instance, `kNumericPolicy`; nothing else hardcodes a threshold.
struct NumericPolicy {
  /// Relative Hermiticity check: |A_ij - conj(A_ji)| <= tol * max(1, maxabs(A)).
  double hermitian_tol = 1e-12;
  /// Two-band closed form is only evaluated when R(k) exceeds this floor.
  double gap_floor = 1e-8;
  /// Single-particle levels within this distance of E=0 count as zero modes.
  double zero_mode_tol = 1e-10;
  /// A located node with direct gap below this is reported as degenerate.
  double node_gap_tol = 1e-6;
  /// Jacobi stops once the off-diagonal norm is below this fraction of ||A||_F.
  double jacobi_rel_tol = 1e-15;
  int jacobi_max_sweeps = 64;
};

inline constexpr NumericPolicy kNumericPolicy{};

/// Raised for inputs that violate an operation's contract.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure rejects its data (gapless grid point,
/// non-integer Chern sum, ...).
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Row-major dense complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ComplexMatrix diagonal(std::span<const double> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  cplx& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<const cplx> entries() const noexcept { return entries_; }
  std::span<cplx> entries() noexcept { return entries_; }
  std::span<const cplx> row(std::size_t i) const { return {entries_.data() + i * cols_, cols_}; }

  std::vector<cplx> column(std::size_t j) const;
  ComplexMatrix select_columns(std::span<const std::size_t> which) const;
  ComplexMatrix adjoint() const;

  double max_abs() const noexcept;
  double frobenius_norm() const noexcept;
  /// max_ij |A_ij - conj(A_ji)|; infinity for non-square matrices.
  double hermiticity_violation() const noexcept;
  bool is_hermitian(double tol = kNumericPolicy.hermitian_tol) const noexcept;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> entries_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
std::vector<cplx> multiply(const ComplexMatrix& a, std::span<const cplx> x);
cplx inner(std::span<const cplx> a, std::span<const cplx> b);  // <a|b>
double norm2(std::span<const cplx> a);

/// Eigenvalues ascending; column i of `eigenvectors` belongs to eigenvalues[i].
struct EigenSystem {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;

  std::size_t size() const noexcept { return eigenvalues.size(); }
};

/// Cyclic complex Jacobi. Throws InvalidInput for non-square or non-Hermitian
/// input; the message carries the measured Hermiticity violation.
EigenSystem eig_hermitian(const ComplexMatrix& a);

/// U = V diag(exp(-i lambda t)) V^dagger.
ComplexMatrix evolve_unitary(const ComplexMatrix& a, double t);
ComplexMatrix evolve_unitary(const EigenSystem& eig, double t);

/// Determinant via LU with partial pivoting. Singular input gives ~0.
cplx det_complex(const ComplexMatrix& a);

void require_hermitian(const ComplexMatrix& a, const std::string& what);

}  // namespace dgprobe
