// Anti-Hermitian generators X of the isospectral deformation
// H(tau) = e^{X tau} H e^{-X tau}, their loop-closure conditions e^X = 1,
// and the audit that X never couples the coding space to the rest of the
// degenerate ground space.

#pragma once

#include "holonome/matrix_kernel.hpp"
#include "holonome/spin_model.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace holonome {

using Vec3 = std::array<double, 3>;

inline constexpr std::int64_t kMaxWinding = 1'000'000;
inline constexpr double kOneQubitClosureTol = 1e-10;
inline constexpr double kTwoQubitClosureTol = 1e-8;

inline double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

/// X = i kappa pi n.(s1 + s2) on one dimer.
struct OneQubitLoop {
  Vec3 n{1.0, 0.0, 0.0};
  std::int64_t kappa = 1;

  [[nodiscard]] double omega() const { return static_cast<double>(kappa) * kPi; }
  [[nodiscard]] double stretch() const { return std::sqrt(2.0 - n[2] * n[2]); }
  /// Rotation angle kappa pi sqrt(2 - n_z^2).
  [[nodiscard]] double theta() const { return omega() * stretch(); }
  /// Logical rotation axis, unit norm.
  [[nodiscard]] Vec3 m() const {
    const double s = stretch();
    return {std::sqrt(2.0) * n[0] / s, std::sqrt(2.0) * n[1] / s, n[2] / s};
  }
};

inline void check_winding(std::int64_t k, const char* name) {
  if (k < 1) throw DomainError(std::string(name) + " must be a positive integer");
  if (k > kMaxWinding) throw DomainError(std::string(name) + " exceeds the cap of 10^6");
}

inline OneQubitLoop make_one_qubit_loop(const Vec3& n, std::int64_t kappa) {
  check_winding(kappa, "kappa");
  for (double c : n)
    if (!std::isfinite(c)) throw DomainError("axis n has a non-finite component");
  if (std::abs(norm3(n) - 1.0) > 1e-12) throw DomainError("axis n must be a unit vector");
  if (std::abs(n[2]) >= 1.0 - 1e-12)
    throw DomainError("nontrivial loop requires |n_z| != 1 (otherwise [H, X] = 0)");
  return {n, kappa};
}

/// Closed two-dimer loop. With the couplings fixed by the winding numbers,
/// Omega2 = kappa_plus pi, sqrt(Omega2^2 + 8 J^2) = kappa_minus pi, Omega1 = kappa' pi.
struct TwoQubitLoop {
  std::int64_t kappa_plus = 2;
  std::int64_t kappa_minus = 3;
  std::int64_t kappa_prime = 1;
  double coupling = 0.0;  // J
  bool forced_coupling = false;

  [[nodiscard]] double omega1() const { return static_cast<double>(kappa_prime) * kPi; }
  [[nodiscard]] double omega2() const { return static_cast<double>(kappa_plus) * kPi; }
  [[nodiscard]] double n2z() const { return -coupling / omega2(); }
  [[nodiscard]] double n2x() const { return std::sqrt(1.0 - n2z() * n2z()); }
  [[nodiscard]] Vec3 n1() const { return {0.0, 0.0, 1.0}; }
  [[nodiscard]] Vec3 n2() const { return {n2x(), 0.0, n2z()}; }
  /// Coefficient of I (x) sigma_Lx in the coding-space connection: sqrt(2) Omega2 n2x.
  [[nodiscard]] double transverse() const { return std::sqrt(2.0) * omega2() * n2x(); }
  [[nodiscard]] double nu_plus() const { return omega2(); }
  [[nodiscard]] double nu_minus() const { return std::sqrt(omega2() * omega2() + 8.0 * coupling * coupling); }
  /// nu_pm k_pm = (Omega2 n2x, 0, Omega2 n2z +- 2 J).
  [[nodiscard]] Vec3 nu_k_plus() const { return {omega2() * n2x(), 0.0, omega2() * n2z() + 2.0 * coupling}; }
  [[nodiscard]] Vec3 nu_k_minus() const { return {omega2() * n2x(), 0.0, omega2() * n2z() - 2.0 * coupling}; }
};

/// J = (pi / (2 sqrt 2)) sqrt(kappa_minus^2 - kappa_plus^2).
inline double coupling_from_windings(std::int64_t kappa_plus, std::int64_t kappa_minus) {
  const double kp = static_cast<double>(kappa_plus);
  const double km = static_cast<double>(kappa_minus);
  return kPi / (2.0 * std::sqrt(2.0)) * std::sqrt((km - kp) * (km + kp));
}

inline bool admissible_windings(std::int64_t kappa_plus, std::int64_t kappa_minus) {
  return kappa_plus >= 1 && kappa_plus < kappa_minus && kappa_minus < 3 * kappa_plus;
}

inline TwoQubitLoop make_two_qubit_loop(std::int64_t kappa_plus, std::int64_t kappa_minus,
                                        std::int64_t kappa_prime) {
  check_winding(kappa_plus, "kappa_plus");
  check_winding(kappa_minus, "kappa_minus");
  check_winding(kappa_prime, "kappa_prime");
  if (!(kappa_minus > kappa_plus)) throw DomainError("constraint kappa_plus < kappa_minus violated");
  if (!(kappa_minus < 3 * kappa_plus))
    throw DomainError("constraint kappa_minus < 3*kappa_plus violated (requires Omega2 > J)");
  TwoQubitLoop loop{kappa_plus, kappa_minus, kappa_prime, coupling_from_windings(kappa_plus, kappa_minus), false};
  return loop;
}

/// Loop with J chosen by hand (e.g. J = 0). kappa_minus is recorded as the
/// nearest integer to nu_minus / pi and the closure is no longer guaranteed.
inline TwoQubitLoop make_forced_coupling_loop(std::int64_t kappa_plus, std::int64_t kappa_prime, double coupling) {
  check_winding(kappa_plus, "kappa_plus");
  check_winding(kappa_prime, "kappa_prime");
  if (!(coupling >= 0.0) || !(coupling < static_cast<double>(kappa_plus) * kPi))
    throw DomainError("forced coupling must satisfy 0 <= J < Omega2");
  TwoQubitLoop loop{kappa_plus, kappa_plus, kappa_prime, coupling, true};
  loop.kappa_minus = static_cast<std::int64_t>(std::llround(loop.nu_minus() / kPi));
  return loop;
}

using Loop = std::variant<OneQubitLoop, TwoQubitLoop>;

struct DeformationGenerator {
  ComplexMatrix x;
  Loop loop;
  ModelKind kind = ModelKind::OneDimer;
  double closure_residual = 0.0;
  double commutator_norm = 0.0;  // ||[H, X]|| against the working-point model

  [[nodiscard]] const OneQubitLoop& one_qubit() const { return std::get<OneQubitLoop>(loop); }
  [[nodiscard]] const TwoQubitLoop& two_qubit() const { return std::get<TwoQubitLoop>(loop); }
};

/// n.(s_a + s_b) for spins a, b of an n_spins register.
inline ComplexMatrix collective_spin(const Vec3& n, int a, int b, int n_spins) {
  const std::array<ComplexMatrix, 3> paulis{pauli_x(), pauli_y(), pauli_z()};
  const int dim = 1 << n_spins;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (int c = 0; c < 3; ++c) {
    if (n[c] == 0.0) continue;
    out += n[c] * (site_operator(paulis[c], a, n_spins) + site_operator(paulis[c], b, n_spins));
  }
  return out;
}

/// ||e^X - 1||_F.
inline double closure_residual(const ComplexMatrix& x) {
  return (expm_skew(x) - identity(x.rows())).norm();
}

inline double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b) { return (a * b - b * a).norm(); }

inline DeformationGenerator one_qubit_generator(const OneQubitLoop& loop) {
  DeformationGenerator g;
  g.kind = ModelKind::OneDimer;
  g.loop = loop;
  g.x = kI * loop.omega() * collective_spin(loop.n, 0, 1, 2);
  g.closure_residual = closure_residual(g.x);
  g.commutator_norm = commutator_norm(build_one_dimer(1.0).hamiltonian, g.x);
  if (g.closure_residual >= kOneQubitClosureTol)
    throw DomainError("one_qubit_generator: loop does not close (residual " + std::to_string(g.closure_residual) +
                      ")");
  return g;
}

inline DeformationGenerator one_qubit_generator(const Vec3& n, std::int64_t kappa) {
  return one_qubit_generator(make_one_qubit_loop(n, kappa));
}

/// Inter-dimer part i J (s1z + s2z)(s3z + s4z).
inline ComplexMatrix interdimer_generator(double coupling) {
  const ComplexMatrix z12 = site_operator(pauli_z(), 0, 4) + site_operator(pauli_z(), 1, 4);
  const ComplexMatrix z34 = site_operator(pauli_z(), 2, 4) + site_operator(pauli_z(), 3, 4);
  return kI * coupling * z12 * z34;
}

/// Builds X without validating closure; used for forced-coupling limits.
inline ComplexMatrix two_qubit_generator_matrix(const TwoQubitLoop& loop) {
  return kI * loop.omega1() * collective_spin(loop.n1(), 0, 1, 4) +
         kI * loop.omega2() * collective_spin(loop.n2(), 2, 3, 4) + interdimer_generator(loop.coupling);
}

inline DeformationGenerator two_qubit_generator(const TwoQubitLoop& loop) {
  DeformationGenerator g;
  g.kind = ModelKind::TwoDimer;
  g.loop = loop;
  g.x = two_qubit_generator_matrix(loop);
  g.closure_residual = closure_residual(g.x);
  g.commutator_norm = commutator_norm(build_two_dimer(1.0, 1.0).hamiltonian, g.x);
  if (!loop.forced_coupling && g.closure_residual >= kTwoQubitClosureTol)
    throw DomainError("two_qubit_generator: loop does not close (residual " + std::to_string(g.closure_residual) +
                      ")");
  return g;
}

inline DeformationGenerator two_qubit_generator(std::int64_t kappa_plus, std::int64_t kappa_minus,
                                                std::int64_t kappa_prime) {
  return two_qubit_generator(make_two_qubit_loop(kappa_plus, kappa_minus, kappa_prime));
}

/// e^{X tau} H e^{-X tau}.
inline ComplexMatrix deformed_hamiltonian(const ComplexMatrix& h, const ComplexMatrix& x, double tau) {
  const ComplexMatrix g = expm_skew(tau * x);
  return g * h * g.adjoint();
}

/// Block form of e^X for two dimers, resolved on dimer 1's T+, T-, {T0, S0}.
struct ClosureBlocks {
  ComplexMatrix y_zero;   // Omega2 n2.(s3 + s4) on dimer 2
  ComplexMatrix y_plus;   // +2 Omega1 + nu_+ k_+.(s3 + s4)
  ComplexMatrix y_minus;  // -2 Omega1 + nu_- k_-.(s3 + s4)
  double nu_plus = 0.0;
  double nu_minus = 0.0;

  /// Reassembles the 16x16 exponential from the three dimer-2 blocks.
  [[nodiscard]] ComplexMatrix assemble() const {
    const DimerBasis b = dimer_basis();
    const ComplexMatrix p_plus = b.t_plus * b.t_plus.adjoint();
    const ComplexMatrix p_minus = b.t_minus * b.t_minus.adjoint();
    const ComplexMatrix p_zero = b.t_zero * b.t_zero.adjoint() + b.s_zero * b.s_zero.adjoint();
    return tensor_product(p_plus, expm_skew(kI * y_plus)) + tensor_product(p_minus, expm_skew(kI * y_minus)) +
           tensor_product(p_zero, expm_skew(kI * y_zero));
  }
  /// Largest ||e^{iY} - 1|| over the three blocks.
  [[nodiscard]] double block_residual() const {
    double r = 0.0;
    for (const ComplexMatrix* y : {&y_zero, &y_plus, &y_minus})
      r = std::max(r, (expm_skew(kI * *y) - identity(4)).norm());
    return r;
  }
};

inline ClosureBlocks closure_blocks(const TwoQubitLoop& loop) {
  ClosureBlocks c;
  c.nu_plus = loop.nu_plus();
  c.nu_minus = loop.nu_minus();
  c.y_zero = loop.omega2() * collective_spin(loop.n2(), 0, 1, 2);
  c.y_plus = 2.0 * loop.omega1() * identity(4) + collective_spin(loop.nu_k_plus(), 0, 1, 2);
  c.y_minus = -2.0 * loop.omega1() * identity(4) + collective_spin(loop.nu_k_minus(), 0, 1, 2);
  return c;
}

/// One audited matrix element <bra| op |ket>.
struct AuditEntry {
  std::string bra;
  std::string op;  // "X" or "X12"
  std::string ket;
  Complex value;
  Complex expected;
  bool passed = false;
};

struct LeakageAudit {
  std::vector<AuditEntry> entries;
  bool passed = true;
  double tolerance = 1e-12;
};

inline LeakageAudit leakage_audit(const DeformationGenerator& gen, const SpinModel& model) {
  if (gen.kind != model.kind) throw DomainError("leakage_audit: generator and model describe different systems");
  const CodingSpace code = coding_space(model);
  LeakageAudit report;
  const double tol = report.tolerance;
  auto record = [&](const std::string& bra, const std::string& op, const std::string& ket, Complex value,
                    Complex expected) {
    const bool ok = std::abs(value - expected) < tol * std::max(1.0, std::abs(expected));
    report.entries.push_back({bra, op, ket, value, expected, ok});
    report.passed = report.passed && ok;
  };

  const int nc = code.coding_dim();
  for (int r = nc; r < code.ground_dim(); ++r)
    for (int c = 0; c < nc; ++c) {
      const Complex v = code.ground_basis.col(r).dot(gen.x * code.ground_basis.col(c));
      record(code.ground_labels[r], "X", code.ground_labels[c], v, 0.0);
    }

  if (model.kind == ModelKind::TwoDimer) {
    const double coupling = gen.two_qubit().coupling;
    const ComplexMatrix x12 = interdimer_generator(coupling);
    const DimerBasis b = dimer_basis();
    struct Ref {
      const char* bra;
      ComplexVector bra_vec;
      const char* ket;
      ComplexVector ket_vec;
      Complex expected;
    };
    const std::vector<Ref> refs{
        {"T+T+", tensor_product(b.t_plus, b.t_plus), "T+T+", tensor_product(b.t_plus, b.t_plus),
         kI * 4.0 * coupling},
        {"T+S0", tensor_product(b.t_plus, b.s_zero), "T+T0", tensor_product(b.t_plus, b.t_zero), 0.0},
        {"S0T+", tensor_product(b.s_zero, b.t_plus), "T0T+", tensor_product(b.t_zero, b.t_plus), 0.0},
        {"S0S0", tensor_product(b.s_zero, b.s_zero), "T0S0", tensor_product(b.t_zero, b.s_zero), 0.0},
        {"S0T0", tensor_product(b.s_zero, b.t_zero), "T0S0", tensor_product(b.t_zero, b.s_zero), 0.0},
    };
    for (const auto& ref : refs) record(ref.bra, "X12", ref.ket, ref.bra_vec.dot(x12 * ref.ket_vec), ref.expected);
  }
  return report;
}

}  // namespace holonome
