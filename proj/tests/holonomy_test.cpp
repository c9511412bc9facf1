#include "holonome/holonomy.hpp"

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace holonome {
namespace {

namespace frozen = testing::frozen;

// Finite-difference oracle for A_ij(tau) = <i; tau| d/dtau |j; tau> with
// |j; tau> = e^{X tau}|j>, evaluated with a central difference.
ComplexMatrix connection_by_finite_difference(const DeformationGenerator& gen, const SpinModel& model, double tau) {
  const CodingSpace code = coding_space(model);
  const double h = 1e-5;
  const ComplexMatrix at = expm_skew(tau * gen.x) * code.ground_basis;
  const ComplexMatrix fwd = expm_skew((tau + h) * gen.x) * code.ground_basis;
  const ComplexMatrix bwd = expm_skew((tau - h) * gen.x) * code.ground_basis;
  return at.adjoint() * (fwd - bwd) / (2.0 * h);
}

TEST(Connection, OneQubitCodingBlockMatchesClosedForm) {
  std::mt19937_64 rng(31);
  const SpinModel model = build_one_dimer(1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const OneQubitLoop loop = make_one_qubit_loop(testing::random_axis(rng), 1 + trial % 5);
    const Connection conn = connection_on_ground_space(one_qubit_generator(loop), model);
    EXPECT_LT((conn.coding_block - analytic_one_qubit_connection(loop)).cwiseAbs().maxCoeff(), 1e-12);
    // Singlet row and column vanish.
    EXPECT_LT(conn.a.row(2).norm() + conn.a.col(2).norm(), 1e-12);
    EXPECT_LT(anti_hermiticity_defect(conn.a), 1e-12);
  }
}

TEST(Connection, TwoQubitCodingBlockMatchesClosedForm) {
  const SpinModel model = build_two_dimer(1.0, 1.0);
  for (const auto& [kp, km, kq] : std::vector<std::tuple<int, int, int>>{{2, 3, 1}, {1, 2, 2}, {3, 7, 1}}) {
    const TwoQubitLoop loop = make_two_qubit_loop(kp, km, kq);
    const Connection conn = connection_on_ground_space(two_qubit_generator(loop), model);
    EXPECT_LT((conn.coding_block - analytic_two_qubit_connection(loop)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(conn.mixing_norm(), 1e-12);
    EXPECT_NEAR(loop.omega2() * loop.n2x(), std::sqrt(loop.omega2() * loop.omega2() - loop.coupling * loop.coupling),
                1e-12);
  }
}

TEST(Connection, AgreesWithFiniteDifferenceDefinition) {
  const SpinModel one = build_one_dimer(1.0);
  const SpinModel two = build_two_dimer(1.0, 1.0);
  const DeformationGenerator g1 = one_qubit_generator({0.48, 0.6, 0.64}, 2);
  const DeformationGenerator g2 = two_qubit_generator(2, 3, 1);
  for (double tau : {0.0, 0.25, 0.6}) {
    const ComplexMatrix a1 = connection_on_ground_space(g1, one).a;
    EXPECT_LT((connection_by_finite_difference(g1, one, tau) - a1).norm(), 1e-7 * a1.norm());
    const ComplexMatrix a2 = connection_on_ground_space(g2, two).a;
    EXPECT_LT((connection_by_finite_difference(g2, two, tau) - a2).norm(), 1e-7 * a2.norm());
  }
}

TEST(Connection, RejectsNonDegenerateModel) {
  EXPECT_THROW(connection_on_ground_space(one_qubit_generator({1.0, 0.0, 0.0}, 1), build_one_dimer(2.0, 1.0)),
               DomainError);
}

TEST(Holonomy, ZeroConnectionGivesIdentity) {
  Connection conn;
  conn.a = ComplexMatrix::Zero(3, 3);
  conn.coding_block = ComplexMatrix::Zero(2, 2);
  EXPECT_LT((holonomy(conn, OneQubitLoop{}).gamma - identity(2)).norm(), 1e-15);
}

TEST(Holonomy, XAxisLoopIsRotationAboutX) {
  const HolonomyGate g = holonomy(one_qubit_generator({1.0, 0.0, 0.0}, 1), build_one_dimer(1.0));
  const ComplexMatrix expected = su2_rotation({1.0, 0.0, 0.0}, std::sqrt(2.0) * kPi);
  EXPECT_LT((g.gamma - expected).norm(), 1e-12);
}

TEST(Holonomy, HadamardAxisKappa3Distance) {
  const OneQubitLoop loop = make_one_qubit_loop({std::sqrt(1.0 / 3.0), 0.0, std::sqrt(2.0 / 3.0)}, 3);
  const HolonomyGate g = holonomy(one_qubit_generator(loop), build_one_dimer(1.0));
  EXPECT_NEAR(phase_invariant_distance(g.gamma, testing::hadamard()), frozen::kHadamardDistanceKappa3, 1e-10);
  EXPECT_NEAR(phase_invariant_distance(g.gamma, testing::hadamard()), 0.079, 1e-3);
}

TEST(AnalyticOneQubitGate, EqualsNumericHolonomy) {
  std::mt19937_64 rng(37);
  const SpinModel model = build_one_dimer(1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const OneQubitLoop loop = make_one_qubit_loop(testing::random_axis(rng), 1 + trial % 9);
    const HolonomyGate numeric = holonomy(one_qubit_generator(loop), model);
    const HolonomyGate analytic = analytic_one_qubit_gate(loop);
    // Exact equality including the global phase e^{-i kappa pi n_z}.
    EXPECT_LT((numeric.gamma - analytic.gamma).norm(), 1e-10);
    EXPECT_LT(unitarity_defect(numeric.gamma), 1e-10);
  }
}

TEST(AnalyticOneQubitGate, XAxisAngleAndHadamardSines) {
  for (std::int64_t k = 1; k <= 5; ++k) {
    const OneQubitLoop loop = make_one_qubit_loop({1.0, 0.0, 0.0}, k);
    EXPECT_NEAR(loop.theta(), std::sqrt(2.0) * k * kPi, 1e-12);
    EXPECT_EQ(loop.m(), (Vec3{1.0, 0.0, 0.0}));
  }
  const Vec3 n{std::sqrt(1.0 / 3.0), 0.0, std::sqrt(2.0 / 3.0)};
  EXPECT_NEAR(std::sin(make_one_qubit_loop(n, 3).theta()), frozen::kSinTheta3, 1e-12);
  EXPECT_NEAR(std::sin(make_one_qubit_loop(n, 10).theta()), frozen::kSinTheta10, 1e-12);
  EXPECT_NEAR(std::sin(make_one_qubit_loop(n, 16).theta()), frozen::kSinTheta16, 1e-12);
}

TEST(AnalyticTwoQubitGate, ExactBlockFormAndAudit231) {
  const TwoQubitFactorization f = analytic_two_qubit_gate(make_two_qubit_loop(2, 3, 1));
  EXPECT_LT(f.block_form_error, 1e-10);
  EXPECT_LT(unitarity_defect(f.gamma_exact), 1e-10);
  // Oracle: split the closed-form connection on sigma_Lz (x) I = +-1 and exponentiate 2x2 blocks.
  const ComplexMatrix a = analytic_two_qubit_connection(f.loop);
  const ComplexMatrix u0 = expm_skew(-a.topLeftCorner(2, 2));
  const ComplexMatrix u1 = expm_skew(-a.bottomRightCorner(2, 2));
  EXPECT_LT((u0 - f.control_block_0).norm(), 1e-10);
  EXPECT_LT((u1 - f.control_block_1).norm(), 1e-10);
  EXPECT_LT(f.gamma_exact.topRightCorner(2, 2).norm() + f.gamma_exact.bottomLeftCorner(2, 2).norm(), 1e-12);
  // Block generators differ only in the sign of the sigma_z part.
  EXPECT_NEAR(std::abs(a(0, 1) - a(2, 3)), 0.0, 1e-12);
  EXPECT_NEAR(a(0, 1).imag(), f.loop.transverse(), 1e-12);
  EXPECT_NEAR((a(0, 0) - a(1, 1)).imag(), 2.0 * f.loop.coupling, 1e-12);
  EXPECT_NEAR((a(2, 2) - a(3, 3)).imag(), -2.0 * f.loop.coupling, 1e-12);

  EXPECT_NEAR(f.discrepancy, frozen::kDiscrepancy231, 1e-9);
  EXPECT_GT(f.discrepancy, 1e-3);
  EXPECT_NEAR(f.invariants_exact.g1.real(), frozen::kG1Exact231, 1e-9);
  EXPECT_NEAR(f.invariants_exact.g2, frozen::kG2Exact231, 1e-9);
  EXPECT_NEAR(f.invariants_controlled.g1.real(), frozen::kG1Controlled231, 1e-9);
  EXPECT_NEAR(f.invariants_controlled.g2, frozen::kG2Controlled231, 1e-9);
}

TEST(AnalyticTwoQubitGate, BlockFormHoldsOnAdmissibleGrid) {
  for (const auto& [kp, km] : std::vector<std::pair<int, int>>{{1, 2}, {3, 4}, {3, 8}, {4, 9}})
    for (int kq : {1, 2, 3}) EXPECT_LT(analytic_two_qubit_gate(make_two_qubit_loop(kp, km, kq)).block_form_error, 1e-10);
}

TEST(AnalyticTwoQubitGate, CommutingLimitAgreesWithFactorization) {
  const TwoQubitLoop loop = make_forced_coupling_loop(2, 1, 0.0);
  const TwoQubitFactorization f = analytic_two_qubit_gate(loop);
  const ComplexMatrix expected = tensor_product(identity(2), su2_rotation({1.0, 0.0, 0.0}, std::sqrt(2.0) * loop.omega2()));
  EXPECT_LT(phase_invariant_distance(f.gamma_exact, expected), 1e-10);
  EXPECT_LT(f.discrepancy, 1e-10);
  EXPECT_LT((f.gamma_exact - f.claimed_factorization).norm(), 1e-10);
  EXPECT_LT(f.invariant_gap, 1e-10);
  EXPECT_NEAR(f.invariants_controlled.g1.real(), 1.0, 1e-12);
  EXPECT_NEAR(f.invariants_controlled.g2, 3.0, 1e-12);
}

TEST(LocalInvariants, IdentityAndCnot) {
  const LocalInvariants id = local_invariants(identity(4));
  EXPECT_NEAR(id.g1.real(), 1.0, 1e-12);
  EXPECT_NEAR(id.g1.imag(), 0.0, 1e-12);
  EXPECT_NEAR(id.g2, 3.0, 1e-12);
  const LocalInvariants cx = local_invariants(testing::cnot());
  EXPECT_NEAR(std::abs(cx.g1), 0.0, 1e-12);
  EXPECT_NEAR(cx.g2, 1.0, 1e-12);
}

TEST(LocalInvariants, InvariantUnderLocalUnitaries) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    const ComplexMatrix u = testing::random_unitary(4, rng);
    const ComplexMatrix left = tensor_product(testing::random_unitary(2, rng), testing::random_unitary(2, rng));
    const ComplexMatrix right = tensor_product(testing::random_unitary(2, rng), testing::random_unitary(2, rng));
    const LocalInvariants a = local_invariants(u);
    const LocalInvariants b = local_invariants(left * u * right);
    EXPECT_LT(invariant_distance(a, b), 1e-9);
  }
}

TEST(LocalInvariants, RejectsNonUnitary) {
  EXPECT_THROW(local_invariants(2.0 * identity(4)), DomainError);
  EXPECT_THROW(local_invariants(identity(2)), DomainError);
}

}  // namespace
}  // namespace holonome
