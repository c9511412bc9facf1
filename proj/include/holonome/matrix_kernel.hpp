// Dense complex linear algebra shared by every other module.
//
// Matrices here are at most 16x16, so exponentials are taken through a
// Hermitian eigendecomposition rather than Pade scaling-and-squaring. That
// keeps every propagator unitary to machine precision.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace holonome {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// Raised when an input leaves the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {
inline std::atomic<double>& tolerance_storage() {
  static std::atomic<double> tol{1e-10};
  return tol;
}
}  // namespace detail

/// Tolerance for Hermiticity / unitarity checks. Defaults to 1e-10.
inline double default_tolerance() { return detail::tolerance_storage().load(); }
inline void set_default_tolerance(double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  detail::tolerance_storage().store(tol);
}

// Pauli matrices, |+> (sigma_z = +1) is index 0.
inline ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
inline ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}
inline ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
inline ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }

inline bool all_finite(const ComplexMatrix& m) {
  return m.real().allFinite() && m.imag().allFinite();
}

inline double hermiticity_defect(const ComplexMatrix& m) {
  return (m - m.adjoint()).norm();
}
inline double anti_hermiticity_defect(const ComplexMatrix& m) {
  return (m + m.adjoint()).norm();
}
inline double unitarity_defect(const ComplexMatrix& u) {
  return (u.adjoint() * u - identity(u.rows())).norm();
}

inline void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw DomainError(std::string(what) + ": matrix must be square and non-empty");
  if (!all_finite(m)) throw DomainError(std::string(what) + ": non-finite entry");
}

/// Kronecker product; the left operand is the slow (leftmost) index.
inline ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// Eigenvalues ascending, grouped into degenerate levels.
struct Spectrum {
  std::vector<double> eigenvalues;   // one per level, ascending
  std::vector<int> multiplicities;   // one per level
  ComplexMatrix eigenvectors;        // columns, grouped level by level
  std::vector<double> all_values;    // one per column of eigenvectors

  [[nodiscard]] int dim() const { return static_cast<int>(eigenvectors.cols()); }
  [[nodiscard]] int level_count() const { return static_cast<int>(eigenvalues.size()); }

  /// Column offset of the first vector in level `l`.
  [[nodiscard]] int level_offset(int l) const {
    int offset = 0;
    for (int k = 0; k < l; ++k) offset += multiplicities[k];
    return offset;
  }
  [[nodiscard]] ComplexMatrix level_vectors(int l) const {
    return eigenvectors.middleCols(level_offset(l), multiplicities[l]);
  }
  [[nodiscard]] ComplexMatrix level_projector(int l) const {
    const ComplexMatrix v = level_vectors(l);
    return v * v.adjoint();
  }
};

/// Eigenvalues closer than 1e-9 * max(1, ||H||_2) belong to one level.
inline Spectrum hermitian_eigensystem(const ComplexMatrix& h) {
  require_square(h, "hermitian_eigensystem");
  const double scale = std::max(1.0, h.norm());
  if (hermiticity_defect(h) > default_tolerance() * scale)
    throw DomainError("hermitian_eigensystem: matrix is not Hermitian");

  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success)
    throw DomainError("hermitian_eigensystem: eigensolver did not converge");

  Spectrum s;
  s.eigenvectors = solver.eigenvectors();
  const Eigen::VectorXd& values = solver.eigenvalues();
  s.all_values.assign(values.data(), values.data() + values.size());

  const double norm2 = values.cwiseAbs().maxCoeff();
  const double gap = 1e-9 * std::max(1.0, norm2);
  for (Eigen::Index i = 0; i < values.size();) {
    Eigen::Index j = i + 1;
    double sum = values(i);
    while (j < values.size() && values(j) - values(j - 1) <= gap) sum += values(j++);
    s.eigenvalues.push_back(sum / static_cast<double>(j - i));
    s.multiplicities.push_back(static_cast<int>(j - i));
    i = j;
  }
  return s;
}

/// exp(-i K) for Hermitian K, via K = W diag(w) W^dagger.
inline ComplexMatrix expm_hermitian_phase(const ComplexMatrix& k) {
  require_square(k, "expm_hermitian_phase");
  const double scale = std::max(1.0, k.norm());
  if (hermiticity_defect(k) > default_tolerance() * scale)
    throw DomainError("expm_hermitian_phase: generator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (k + k.adjoint()));
  const ComplexMatrix& w = solver.eigenvectors();
  ComplexVector phases(w.cols());
  for (Eigen::Index i = 0; i < w.cols(); ++i)
    phases(i) = std::polar(1.0, -solver.eigenvalues()(i));
  return w * phases.asDiagonal() * w.adjoint();
}

/// exp(M) for anti-Hermitian M. Uses M = -i K with K = i M Hermitian.
inline ComplexMatrix expm_skew(const ComplexMatrix& m) {
  require_square(m, "expm_skew");
  const double scale = std::max(1.0, m.norm());
  if (anti_hermiticity_defect(m) > default_tolerance() * scale)
    throw DomainError("expm_skew: generator is not anti-Hermitian");
  return expm_hermitian_phase(kI * m);
}

/// sqrt(1 - |tr(U^dagger V)| / dim); zero iff U and V agree up to a global phase.
/// For unitaries ||U - e^{i phi} V||_F^2 = 2 dim - 2 |tr(U^dagger V)| with
/// phi = arg tr(U^dagger V), which avoids the cancellation in 1 - overlap.
inline double phase_invariant_distance(const ComplexMatrix& u, const ComplexMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw DomainError("phase_invariant_distance: dimension mismatch");
  require_square(u, "phase_invariant_distance");
  const double dim = static_cast<double>(u.rows());
  const Complex tr = (u.adjoint() * v).trace();
  const Complex phase = std::abs(tr) > 0.0 ? tr / std::abs(tr) : Complex(1.0);
  return std::min(1.0, (u - v / phase).norm() / std::sqrt(2.0 * dim));
}

/// Spin operator acting on site `site` of an `n`-spin register, spin 0 slowest.
inline ComplexMatrix site_operator(const ComplexMatrix& single, int site, int n_spins) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int k = 0; k < n_spins; ++k) out = tensor_product(out, k == site ? single : identity(2));
  return out;
}

}  // namespace holonome
