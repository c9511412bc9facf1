#include "holonome/spin_model.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "test_support.hpp"

namespace holonome {
namespace {

std::vector<double> sorted_diagonal(const ComplexMatrix& h) {
  std::vector<double> d;
  for (Eigen::Index i = 0; i < h.rows(); ++i) d.push_back(h(i, i).real());
  std::sort(d.begin(), d.end());
  return d;
}

TEST(OneDimer, WorkingPointSpectrum) {
  const SpinModel m = build_one_dimer(1.0, 1.0);
  ASSERT_EQ(m.spectrum.level_count(), 2);
  EXPECT_NEAR(m.spectrum.eigenvalues[0], -1.0, 1e-12);
  EXPECT_EQ(m.spectrum.multiplicities[0], 3);
  EXPECT_NEAR(m.spectrum.eigenvalues[1], 3.0, 1e-12);
  EXPECT_NEAR(m.spectrum.eigenvalues[1] - m.spectrum.eigenvalues[0], 4.0, 1e-12);
  EXPECT_NEAR(m.ground_projector.trace().real(), 3.0, 1e-12);
  EXPECT_TRUE(m.at_degenerate_point());
}

TEST(OneDimer, DimerStatesCarryClosedFormEnergies) {
  const SpinModel m = build_one_dimer(1.0, 1.0);
  const DimerBasis b = dimer_basis();
  EXPECT_NEAR(b.t_plus.dot(m.hamiltonian * b.t_plus).real(), -1.0, 1e-14);
  EXPECT_NEAR(b.t_zero.dot(m.hamiltonian * b.t_zero).real(), -1.0, 1e-14);
  EXPECT_NEAR(b.s_zero.dot(m.hamiltonian * b.s_zero).real(), -1.0, 1e-14);
  EXPECT_NEAR(b.t_minus.dot(m.hamiltonian * b.t_minus).real(), 3.0, 1e-14);
}

TEST(OneDimer, StrongFieldHasUniqueGround) {
  const SpinModel m = build_one_dimer(2.0, 1.0);
  EXPECT_NEAR(m.ground_energy, -3.0, 1e-12);
  EXPECT_EQ(m.ground_multiplicity(), 1);
  const DimerBasis b = dimer_basis();
  EXPECT_NEAR(std::abs(m.spectrum.level_vectors(0).col(0).dot(b.t_plus)), 1.0, 1e-12);
  EXPECT_FALSE(m.at_degenerate_point());
  EXPECT_THROW(coding_space(m), DomainError);
}

TEST(OneDimer, RandomCouplingsMatchClosedForm) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.05, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double w = u(rng);
    const double j = u(rng);
    const SpinModel m = build_one_dimer(w, j);
    std::vector<double> expected{-2 * w + j, -j, 2 * w + j, -j};
    std::sort(expected.begin(), expected.end());
    std::vector<double> got = m.spectrum.all_values;
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(got[i], expected[i], 1e-12);
  }
}

TEST(OneDimer, RejectsNonPositiveCouplings) {
  EXPECT_THROW(build_one_dimer(0.0, 1.0), DomainError);
  EXPECT_THROW(build_one_dimer(1.0, -1.0), DomainError);
}

TEST(TwoDimer, GroundLevel) {
  const SpinModel a = build_two_dimer(1.0, 1.0);
  EXPECT_NEAR(a.ground_energy, -2.0, 1e-12);
  EXPECT_EQ(a.ground_multiplicity(), 9);
  const SpinModel b = build_two_dimer(1.0, 2.0);
  EXPECT_NEAR(b.ground_energy, -3.0, 1e-12);
  EXPECT_EQ(b.ground_multiplicity(), 9);
  EXPECT_THROW(build_two_dimer(1.0, 0.0), DomainError);
}

TEST(TwoDimer, SpectrumIsMinkowskiSumOfDimers) {
  const SpinModel one = build_one_dimer(1.0, 1.0);
  const SpinModel two = build_two_dimer(1.0, 1.0);
  std::vector<double> sums;
  for (double a : one.spectrum.all_values)
    for (double b : one.spectrum.all_values) sums.push_back(a + b);
  std::sort(sums.begin(), sums.end());
  for (int i = 0; i < 16; ++i) EXPECT_NEAR(two.spectrum.all_values[i], sums[i], 1e-12);
}

TEST(SpinModels, DiagonalInProductBasis) {
  for (const SpinModel& m : {build_one_dimer(1.3, 0.7), build_two_dimer(1.0, 2.0)}) {
    ComplexMatrix off = m.hamiltonian;
    off.diagonal().setZero();
    EXPECT_EQ(off.norm(), 0.0);
    EXPECT_EQ(hermiticity_defect(m.hamiltonian), 0.0);
    // Commutes with total sigma_z parity.
    ComplexMatrix parity = identity(1);
    for (int k = 0; k < m.n_spins; ++k) parity = tensor_product(parity, pauli_z());
    EXPECT_EQ((parity * m.hamiltonian - m.hamiltonian * parity).norm(), 0.0);
  }
  EXPECT_EQ(sorted_diagonal(build_one_dimer(1.0, 1.0).hamiltonian), (std::vector<double>{-1, -1, -1, 3}));
}

TEST(DimerBasis, OrthonormalAndZActions) {
  const DimerBasis b = dimer_basis();
  ComplexMatrix v(4, 4);
  v << b.t_plus, b.t_zero, b.t_minus, b.s_zero;
  EXPECT_LT((v.adjoint() * v - identity(4)).norm(), 1e-15);
  EXPECT_EQ(b.t_zero.dot(b.s_zero), Complex(0.0));
  const ComplexMatrix z1 = site_operator(pauli_z(), 0, 2);
  const ComplexMatrix z2 = site_operator(pauli_z(), 1, 2);
  EXPECT_LT((z1 * b.t_plus - b.t_plus).norm(), 1e-15);
  EXPECT_LT((z2 * b.t_plus - b.t_plus).norm(), 1e-15);
  EXPECT_LT((z1 * b.t_zero - b.s_zero).norm(), 1e-15);
  EXPECT_LT((z2 * b.t_zero + b.s_zero).norm(), 1e-15);
  // |+-> is index 1: spin 1 up, spin 2 down.
  EXPECT_EQ((z1 * ComplexVector::Unit(4, 1))(1), Complex(1.0));
  EXPECT_EQ((z2 * ComplexVector::Unit(4, 1))(1), Complex(-1.0));
}

TEST(CodingSpace, RanksAndLabels) {
  const CodingSpace c1 = coding_space(build_one_dimer(1.0));
  EXPECT_NEAR(c1.projector.trace().real(), 2.0, 1e-12);
  EXPECT_EQ(c1.ground_dim(), 3);
  EXPECT_EQ(c1.labels, (std::vector<std::string>{"T+", "T0"}));
  EXPECT_EQ(c1.ground_labels, (std::vector<std::string>{"T+", "T0", "S0"}));

  const CodingSpace c2 = coding_space(build_two_dimer(1.0, 1.0));
  EXPECT_NEAR(c2.projector.trace().real(), 4.0, 1e-12);
  EXPECT_EQ(c2.ground_dim(), 9);
  EXPECT_EQ(c2.labels, (std::vector<std::string>{"T+T+", "T+T0", "T0T+", "T0T0"}));
  EXPECT_EQ(c2.ground_labels,
            (std::vector<std::string>{"T+T+", "T+T0", "T0T+", "T0T0", "T+S0", "T0S0", "S0T+", "S0T0", "S0S0"}));
}

TEST(CodingSpace, LogicalPauliAlgebraAndSubsetProperty) {
  for (const SpinModel& m : {build_one_dimer(1.0), build_two_dimer(1.0, 1.0)}) {
    const CodingSpace c = coding_space(m);
    const ComplexMatrix& p = c.projector;
    EXPECT_LT((p * m.ground_projector - p).norm(), 1e-12);
    for (const LogicalPaulis& q : c.qubits) {
      EXPECT_LT((p * (q.x * q.y - kI * q.z) * p).norm(), 1e-14);
      EXPECT_LT((p * (q.x * q.x - q.identity) * p).norm(), 1e-14);
      EXPECT_LT((q.z * c.basis.col(0) - c.basis.col(0)).norm(), 1e-15);
    }
  }
}

}  // namespace
}  // namespace holonome
