// Adiabatic verification of the holonomy.
//
// In the frame |phi> = e^{-X tau}|psi> the Schroedinger equation
// i d/dtau |psi> = T H(tau) |psi> has the constant Hermitian generator
// T H - i X, so the propagator over the whole loop is
// U = e^X e^{-i(T H - i X)}. A classical RK4 integrator of the lab-frame
// equation serves as the independent cross-check.

#pragma once

#include "holonome/deformation.hpp"
#include "holonome/holonomy.hpp"
#include "holonome/matrix_kernel.hpp"
#include "holonome/spin_model.hpp"

#include <optional>
#include <vector>

namespace holonome {

inline ComplexMatrix exact_propagator(const SpinModel& model, const DeformationGenerator& gen, double total_time) {
  if (!(total_time >= 0.0) || !std::isfinite(total_time))
    throw DomainError("exact_propagator: total time must be finite and non-negative");
  if (gen.x.rows() != model.hamiltonian.rows()) throw DomainError("exact_propagator: dimension mismatch");
  const ComplexMatrix rotating = total_time * model.hamiltonian - kI * gen.x;
  return expm_skew(gen.x) * expm_hermitian_phase(rotating);
}

/// RK4 on i dU/dtau = T H(tau) U, U(0) = 1, with H(tau) = e^{X tau} H e^{-X tau} exact at every stage.
inline ComplexMatrix ode_propagator(const SpinModel& model, const DeformationGenerator& gen, double total_time,
                                   int steps) {
  if (steps < 1) throw DomainError("ode_propagator: steps must be >= 1");
  if (gen.x.rows() != model.hamiltonian.rows()) throw DomainError("ode_propagator: dimension mismatch");
  const Eigen::Index dim = model.hamiltonian.rows();

  // i X = W diag(lambda) W^dagger  =>  e^{X tau} = W diag(e^{-i lambda tau}) W^dagger.
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (kI * gen.x + (kI * gen.x).adjoint()));
  const ComplexMatrix& w = solver.eigenvectors();
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const ComplexMatrix h_rot = w.adjoint() * model.hamiltonian * w;  // H in the X eigenbasis

  const auto rate = [&](double tau, const ComplexMatrix& u) -> ComplexMatrix {
    ComplexVector d(dim);
    for (Eigen::Index i = 0; i < dim; ++i) d(i) = std::polar(1.0, -lambda(i) * tau);
    const ComplexMatrix h_tau = w * (d.asDiagonal() * h_rot * d.conjugate().asDiagonal()) * w.adjoint();
    return (-kI * total_time) * (h_tau * u);
  };

  const double h = 1.0 / steps;
  ComplexMatrix u = identity(dim);
  for (int s = 0; s < steps; ++s) {
    const double tau = s * h;
    const ComplexMatrix k1 = rate(tau, u);
    const ComplexMatrix k2 = rate(tau + 0.5 * h, u + 0.5 * h * k1);
    const ComplexMatrix k3 = rate(tau + 0.5 * h, u + 0.5 * h * k2);
    const ComplexMatrix k4 = rate(tau + h, u + h * k3);
    u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return u;
}

struct HolonomyFidelity {
  double fidelity = 0.0;
  double leakage = 0.0;
  Complex dynamical_phase;  // e^{-i E0 T}
  ComplexMatrix coding_block;  // <c_i|U|c_j> e^{+i E0 T}
};

/// F = |tr(Gamma^dagger V)| / dim_C with V the phase-corrected coding block of U;
/// leakage = 1 - ||P0 U P_C||^2 / dim_C.
inline HolonomyFidelity holonomy_fidelity(const ComplexMatrix& u, const HolonomyGate& gate, const SpinModel& model,
                                          double total_time) {
  if (u.rows() != model.hamiltonian.rows() || u.cols() != u.rows())
    throw DomainError("holonomy_fidelity: propagator dimension does not match the model");
  const CodingSpace code = coding_space(model);
  if (gate.gamma.rows() != code.coding_dim()) throw DomainError("holonomy_fidelity: gate dimension mismatch");

  HolonomyFidelity f;
  f.dynamical_phase = std::polar(1.0, -model.ground_energy * total_time);
  const ComplexMatrix image = u * code.basis;
  f.coding_block = std::conj(f.dynamical_phase) * (code.basis.adjoint() * image);
  const double dim_c = code.coding_dim();
  f.fidelity = std::min(1.0, std::abs((gate.gamma.adjoint() * f.coding_block).trace()) / dim_c);
  const double retained = (model.ground_projector * image).squaredNorm() / dim_c;
  f.leakage = std::clamp(1.0 - retained, 0.0, 1.0);
  return f;
}

struct AdiabaticRun {
  double total_time = 0.0;
  ComplexMatrix propagator;
  double fidelity = 0.0;
  double leakage = 0.0;
  Complex dynamical_phase;
  std::optional<double> ode_deviation;  // ||U_exact - U_rk4||_F when cross-checked
};

/// One run per T using the closed-form propagator. When `ode_steps` > 0 every
/// `ode_every`-th run is also integrated with RK4 and the deviation recorded.
inline std::vector<AdiabaticRun> adiabatic_sweep(const SpinModel& model, const DeformationGenerator& gen,
                                                 const HolonomyGate& gate, const std::vector<double>& times,
                                                 int ode_steps = 0, std::size_t ode_every = 1) {
  if (times.empty()) throw DomainError("adiabatic_sweep: T list must not be empty");
  for (double t : times)
    if (!(t > 0.0)) throw DomainError("adiabatic_sweep: every T must be positive");
  std::vector<AdiabaticRun> runs;
  runs.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    AdiabaticRun run;
    run.total_time = times[i];
    run.propagator = exact_propagator(model, gen, times[i]);
    const HolonomyFidelity f = holonomy_fidelity(run.propagator, gate, model, times[i]);
    run.fidelity = f.fidelity;
    run.leakage = f.leakage;
    run.dynamical_phase = f.dynamical_phase;
    if (ode_steps > 0 && i % std::max<std::size_t>(ode_every, 1) == 0)
      run.ode_deviation = (ode_propagator(model, gen, times[i], ode_steps) - run.propagator).norm();
    runs.push_back(std::move(run));
  }
  return runs;
}

}  // namespace holonome
