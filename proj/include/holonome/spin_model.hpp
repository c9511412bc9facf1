// Ising dimer Hamiltonians, the triplet/singlet dimer basis, and the logical
// coding spaces carved out of the degenerate ground space.
//
// Conventions: spin 1 is the slow (leftmost) tensor factor and |+> has
// sigma_z = +1, so the two-spin product basis is |++>, |+->, |-+>, |-->.

#pragma once

#include "holonome/matrix_kernel.hpp"

#include <array>
#include <string>
#include <vector>

namespace holonome {

enum class ModelKind { OneDimer, TwoDimer };

struct SpinModel {
  ModelKind kind = ModelKind::OneDimer;
  int n_spins = 2;
  // One dimer: field omega and coupling j1. Two dimers: j1 and j2 (field == coupling per dimer).
  double omega = 1.0;
  double j1 = 1.0;
  double j2 = 0.0;
  ComplexMatrix hamiltonian;
  Spectrum spectrum;
  ComplexMatrix ground_projector;
  double ground_energy = 0.0;

  [[nodiscard]] int dim() const { return static_cast<int>(hamiltonian.rows()); }
  [[nodiscard]] int ground_multiplicity() const { return spectrum.multiplicities.front(); }
  /// Ground multiplicity 3 (one dimer) or 9 (two dimers).
  [[nodiscard]] bool at_degenerate_point() const {
    return ground_multiplicity() == (kind == ModelKind::OneDimer ? 3 : 9);
  }
};

/// -omega s1z - omega s2z + coupling s1z s2z on spins (first, first + 1).
inline ComplexMatrix dimer_hamiltonian(double omega, double coupling, int first, int n_spins) {
  const ComplexMatrix z1 = site_operator(pauli_z(), first, n_spins);
  const ComplexMatrix z2 = site_operator(pauli_z(), first + 1, n_spins);
  return -omega * z1 - omega * z2 + coupling * z1 * z2;
}

namespace detail {
inline SpinModel finish_model(SpinModel m) {
  m.spectrum = hermitian_eigensystem(m.hamiltonian);
  m.ground_energy = m.spectrum.eigenvalues.front();
  m.ground_projector = m.spectrum.level_projector(0);
  return m;
}
}  // namespace detail

inline SpinModel build_one_dimer(double omega, double j1) {
  if (!(omega > 0.0) || !(j1 > 0.0) || !std::isfinite(omega) || !std::isfinite(j1))
    throw DomainError("build_one_dimer: omega and J1 must be positive");
  SpinModel m;
  m.kind = ModelKind::OneDimer;
  m.n_spins = 2;
  m.omega = omega;
  m.j1 = j1;
  m.hamiltonian = dimer_hamiltonian(omega, j1, 0, 2);
  return detail::finish_model(std::move(m));
}

/// Degenerate working point omega = J1.
inline SpinModel build_one_dimer(double j1 = 1.0) { return build_one_dimer(j1, j1); }

inline SpinModel build_two_dimer(double j1 = 1.0, double j2 = 1.0) {
  if (!(j1 > 0.0) || !(j2 > 0.0) || !std::isfinite(j1) || !std::isfinite(j2))
    throw DomainError("build_two_dimer: J1 and J2 must be positive");
  SpinModel m;
  m.kind = ModelKind::TwoDimer;
  m.n_spins = 4;
  m.omega = j1;
  m.j1 = j1;
  m.j2 = j2;
  m.hamiltonian = dimer_hamiltonian(j1, j1, 0, 4) + dimer_hamiltonian(j2, j2, 2, 4);
  return detail::finish_model(std::move(m));
}

struct DimerBasis {
  ComplexVector t_plus;
  ComplexVector t_zero;
  ComplexVector t_minus;
  ComplexVector s_zero;
};

inline DimerBasis dimer_basis() {
  const double r = 1.0 / std::sqrt(2.0);
  DimerBasis b;
  b.t_plus = ComplexVector::Unit(4, 0);
  b.t_minus = ComplexVector::Unit(4, 3);
  b.t_zero = ComplexVector::Zero(4);
  b.t_zero << 0.0, r, r, 0.0;
  b.s_zero = ComplexVector::Zero(4);
  b.s_zero << 0.0, r, -r, 0.0;
  return b;
}

/// Logical Pauli operators of one encoded qubit, embedded in the full space.
struct LogicalPaulis {
  ComplexMatrix x;
  ComplexMatrix y;
  ComplexMatrix z;
  ComplexMatrix identity;
};

struct CodingSpace {
  ModelKind kind = ModelKind::OneDimer;
  std::vector<std::string> labels;  // logical basis, |0...0>_L first
  ComplexMatrix basis;              // columns in the full space
  std::vector<LogicalPaulis> qubits;
  ComplexMatrix projector;
  // Ordered ground basis: coding vectors first, then the S0-containing ones.
  std::vector<std::string> ground_labels;
  ComplexMatrix ground_basis;

  [[nodiscard]] int coding_dim() const { return static_cast<int>(basis.cols()); }
  [[nodiscard]] int ground_dim() const { return static_cast<int>(ground_basis.cols()); }
};

namespace detail {

struct LabelledVector {
  std::string label;
  ComplexVector vec;
};

inline LogicalPaulis dimer_logical_paulis() {
  const DimerBasis b = dimer_basis();
  const ComplexMatrix up_zero = b.t_plus * b.t_zero.adjoint();
  const ComplexMatrix zero_up = b.t_zero * b.t_plus.adjoint();
  LogicalPaulis p;
  p.x = up_zero + zero_up;
  p.y = -kI * (up_zero - zero_up);
  p.z = b.t_plus * b.t_plus.adjoint() - b.t_zero * b.t_zero.adjoint();
  p.identity = b.t_plus * b.t_plus.adjoint() + b.t_zero * b.t_zero.adjoint();
  return p;
}

inline ComplexMatrix columns_of(const std::vector<LabelledVector>& vs) {
  ComplexMatrix m(vs.front().vec.size(), static_cast<Eigen::Index>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = vs[i].vec;
  return m;
}

}  // namespace detail

inline CodingSpace coding_space(const SpinModel& model) {
  if (!model.at_degenerate_point())
    throw DomainError("coding_space: model is not at its degenerate working point (ground multiplicity " +
                      std::to_string(model.ground_multiplicity()) + ")");

  const DimerBasis b = dimer_basis();
  const std::array<detail::LabelledVector, 2> coding{{{"T+", b.t_plus}, {"T0", b.t_zero}}};
  const std::array<detail::LabelledVector, 3> ground{{{"T+", b.t_plus}, {"T0", b.t_zero}, {"S0", b.s_zero}}};

  CodingSpace c;
  c.kind = model.kind;
  std::vector<detail::LabelledVector> code_vecs;
  std::vector<detail::LabelledVector> rest_vecs;
  const LogicalPaulis single = detail::dimer_logical_paulis();

  if (model.kind == ModelKind::OneDimer) {
    for (const auto& v : coding) code_vecs.push_back(v);
    rest_vecs.push_back(ground[2]);
    c.qubits.push_back(single);
  } else {
    for (const auto& a : coding)
      for (const auto& d : coding) code_vecs.push_back({a.label + d.label, tensor_product(a.vec, d.vec)});
    // Lexicographic in (T+, T0, S0) order, keeping only S0-containing products.
    for (const auto& a : ground)
      for (const auto& d : ground)
        if (a.label == "S0" || d.label == "S0")
          rest_vecs.push_back({a.label + d.label, tensor_product(a.vec, d.vec)});
    const ComplexMatrix& il = single.identity;
    c.qubits.push_back({tensor_product(single.x, il), tensor_product(single.y, il), tensor_product(single.z, il),
                        tensor_product(il, il)});
    c.qubits.push_back({tensor_product(il, single.x), tensor_product(il, single.y), tensor_product(il, single.z),
                        tensor_product(il, il)});
  }

  for (const auto& v : code_vecs) c.labels.push_back(v.label);
  c.basis = detail::columns_of(code_vecs);
  c.projector = c.basis * c.basis.adjoint();

  std::vector<detail::LabelledVector> all = code_vecs;
  all.insert(all.end(), rest_vecs.begin(), rest_vecs.end());
  for (const auto& v : all) c.ground_labels.push_back(v.label);
  c.ground_basis = detail::columns_of(all);

  // The declared basis must span exactly the model's ground level.
  const double scale = std::max(1.0, model.hamiltonian.norm());
  if ((model.hamiltonian * c.ground_basis - model.ground_energy * c.ground_basis).norm() > 1e-9 * scale ||
      (c.ground_basis * c.ground_basis.adjoint() - model.ground_projector).norm() > 1e-9)
    throw DomainError("coding_space: dimer ground basis does not match the model spectrum");
  return c;
}

}  // namespace holonome
