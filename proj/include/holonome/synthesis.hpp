// Discrete searches over winding numbers and repetition counts that
// approximate target gates from the closed-loop gate set, plus the covering
// diagnostics and tabulated figure data.
//
// Angle errors are circular: r = |delta| mod P, error = min(r, P - r).
// Ties go to the smallest winding number, then the smallest repetition count.

#pragma once

#include "holonome/deformation.hpp"
#include "holonome/holonomy.hpp"
#include "holonome/matrix_kernel.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

namespace holonome {

inline constexpr double kTwoPi = 2.0 * kPi;

inline double circular_distance(double delta, double period = kTwoPi) {
  const double r = std::fmod(std::abs(delta), period);
  return std::min(r, period - r);
}

/// Logical rotation axis m of e^{-i theta m.sigma}.
struct RotationAxis {
  Vec3 m{1.0, 0.0, 0.0};
  std::string name = "x";

  static RotationAxis x() { return {{1.0, 0.0, 0.0}, "x"}; }
  static RotationAxis y() { return {{0.0, 1.0, 0.0}, "y"}; }
  static RotationAxis hadamard() {
    const double r = 1.0 / std::sqrt(2.0);
    return {{r, 0.0, r}, "hadamard"};
  }
  static RotationAxis custom(const Vec3& m) {
    const double len = norm3(m);
    if (!(len > 0.0)) throw DomainError("rotation axis must be non-zero");
    return {{m[0] / len, m[1] / len, m[2] / len}, "custom"};
  }

  /// Loop direction n realizing this axis; |m_z| = 1 is unreachable.
  [[nodiscard]] Vec3 loop_direction() const {
    if (std::abs(m[2]) >= 1.0 - 1e-12)
      throw DomainError("rotation axis unreachable: it requires |n_z| = 1, for which [H, X] = 0");
    const double s = std::sqrt(2.0 / (1.0 + m[2] * m[2]));
    Vec3 n{m[0] * s / std::sqrt(2.0), m[1] * s / std::sqrt(2.0), m[2] * s};
    const double len = norm3(n);
    for (double& c : n) c /= len;
    return n;
  }
};

struct RotationCandidate {
  std::int64_t kappa = 0;
  double theta = 0.0;
  double angle_error = 0.0;
};

struct RotationSearchResult {
  RotationAxis axis;
  double target_angle = 0.0;
  double epsilon = 0.0;
  double period = kTwoPi;
  std::int64_t kappa_max = 0;
  std::int64_t kappa = 0;
  double theta = 0.0;
  double angle_error = 0.0;
  double gate_distance = 0.0;
  HolonomyGate gate;
  bool exhausted = true;
  std::vector<RotationCandidate> ranked;  // best few, best first
};

/// Scans 1 <= kappa <= kappa_max for the rotation angle closest to the target.
/// `period` is 2 pi by default; pass pi to compare gates up to global phase.
inline RotationSearchResult search_rotation(const RotationAxis& axis, double target_angle, double epsilon,
                                            std::int64_t kappa_max, double period = kTwoPi,
                                            std::size_t keep_ranked = 3) {
  if (!(epsilon > 0.0)) throw DomainError("search_rotation: epsilon must be positive");
  check_winding(kappa_max, "kappa_max");
  if (!(period > 0.0)) throw DomainError("search_rotation: period must be positive");
  const Vec3 n = axis.loop_direction();

  const auto better = [](const RotationCandidate& a, const RotationCandidate& b) {
    return std::tie(a.angle_error, a.kappa) < std::tie(b.angle_error, b.kappa);
  };
  std::vector<RotationCandidate> ranked;
  for (std::int64_t k = 1; k <= kappa_max; ++k) {
    const OneQubitLoop loop{n, k};
    const double theta = loop.theta();
    const RotationCandidate c{k, theta, circular_distance(target_angle - theta, period)};
    if (ranked.size() < keep_ranked || better(c, ranked.back())) {
      ranked.insert(std::upper_bound(ranked.begin(), ranked.end(), c, better), c);
      if (ranked.size() > std::max<std::size_t>(keep_ranked, 1)) ranked.pop_back();
    }
  }

  RotationSearchResult r;
  r.axis = axis;
  r.target_angle = target_angle;
  r.epsilon = epsilon;
  r.period = period;
  r.kappa_max = kappa_max;
  r.kappa = ranked.front().kappa;
  r.theta = ranked.front().theta;
  r.angle_error = ranked.front().angle_error;
  r.exhausted = !(r.angle_error < epsilon);
  r.gate = analytic_one_qubit_gate(make_one_qubit_loop(n, r.kappa));
  r.gate_distance = phase_invariant_distance(su2_rotation(axis.m, target_angle), r.gate.gamma);
  r.ranked = std::move(ranked);
  return r;
}

struct Su2Step {
  char axis = 'x';  // 'x' or 'y'
  double target_angle = 0.0;
  RotationSearchResult search;
};

struct Su2Program {
  std::vector<Su2Step> steps;  // composite = steps[0].gate * steps[1].gate * ...
  ComplexMatrix composite;
  double distance = 0.0;
  double component_distance_sum = 0.0;
  bool exhausted = false;
};

/// Angles (alpha, beta, gamma) with U = e^{i phi} Ry(alpha) Rx(beta) Ry(gamma),
/// R_a(t) = e^{-i t sigma_a}, each angle reduced into (-pi/2, pi/2].
inline std::array<double, 3> euler_yxy(const ComplexMatrix& u) {
  if (u.rows() != 2 || u.cols() != 2) throw DomainError("euler_yxy: expected a 2x2 matrix");
  if (unitarity_defect(u) > 1e-8) throw DomainError("euler_yxy: matrix is not unitary");
  // W sz W^dagger = sy and W sy W^dagger = sx, so Ry Rx Ry = W (Rz Ry Rz) W^dagger.
  ComplexMatrix w(2, 2);
  w << 1.0, 1.0, kI, -kI;
  w /= std::sqrt(2.0);
  ComplexMatrix v = w.adjoint() * u * w;
  v /= std::sqrt(v.determinant());
  const Complex a = v(0, 0);
  const Complex b = v(1, 0);
  const double beta = std::atan2(std::abs(b), std::abs(a));
  double alpha = 0.0;
  double gamma = 0.0;
  if (std::abs(b) < 1e-14) {
    alpha = -std::arg(a);
  } else if (std::abs(a) < 1e-14) {
    alpha = std::arg(b) / 2.0;
    gamma = -alpha;
  } else {
    alpha = (std::arg(b) - std::arg(a)) / 2.0;
    gamma = (-std::arg(a) - std::arg(b)) / 2.0;
  }
  auto reduce = [](double t) {
    t = std::remainder(t, kPi);  // [-pi/2, pi/2]
    return t <= -kPi / 2.0 ? t + kPi : t;
  };
  return {reduce(alpha), reduce(beta), reduce(gamma)};
}

inline Su2Program synthesize_su2(const ComplexMatrix& target, double epsilon_per_rotation, std::int64_t kappa_max) {
  const auto [alpha, beta, gamma] = euler_yxy(target);
  Su2Program p;
  p.composite = identity(2);
  const std::array<std::pair<char, double>, 3> plan{{{'y', alpha}, {'x', beta}, {'y', gamma}}};
  for (const auto& [axis, angle] : plan) {
    if (std::abs(angle) < 1e-12) continue;
    Su2Step step{axis, angle,
                 search_rotation(axis == 'x' ? RotationAxis::x() : RotationAxis::y(), angle, epsilon_per_rotation,
                                 kappa_max, kPi, 1)};
    p.composite = p.composite * step.search.gate.gamma;
    p.component_distance_sum += step.search.gate_distance;
    p.exhausted = p.exhausted || step.search.exhausted;
    p.steps.push_back(std::move(step));
  }
  p.distance = phase_invariant_distance(target, p.composite);
  if (p.distance > p.component_distance_sum + 1e-12)
    throw std::logic_error("synthesize_su2: composite distance exceeds the sum of component distances");
  return p;
}

/// Admissible (kappa_plus, kappa_minus): kappa_plus < kappa_minus < 3 kappa_plus.
inline std::vector<std::pair<std::int64_t, std::int64_t>> admissible_pairs(std::int64_t kappa_plus_max) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (std::int64_t kp = 1; kp <= kappa_plus_max; ++kp)
    for (std::int64_t km = kp + 1; km < 3 * kp; ++km) out.emplace_back(kp, km);
  return out;
}

struct ControlledPhaseCandidate {
  std::int64_t kappa_plus = 0;
  std::int64_t kappa_minus = 0;
  std::int64_t repetitions = 0;
  double coupling = 0.0;
  double angle_error = 0.0;

  [[nodiscard]] auto key() const { return std::tie(angle_error, repetitions, kappa_plus, kappa_minus); }
};

struct ControlledPhaseSearchResult {
  double target_angle = 0.0;
  double epsilon = 0.0;
  std::int64_t kappa_plus_max = 0;
  std::int64_t n_max = 0;
  std::int64_t kappa_prime = 1;
  ControlledPhaseCandidate best;
  bool exhausted = true;
  double gate_distance = 0.0;          // (Gamma^C)^n against controlled-e^{i theta sz}
  ComplexMatrix repeated_controlled;   // (Gamma^C)^n, the repetition scheme
  ComplexMatrix repeated_exact;        // (e^{-A|C2})^n, for audit
  double exact_distance = 0.0;         // repeated_exact against the target
};

/// Error of the repeated controlled-phase angle 2 n J against the target.
inline double controlled_phase_error(std::int64_t kappa_plus, std::int64_t kappa_minus, std::int64_t repetitions,
                                     double target_angle) {
  const double j = coupling_from_windings(kappa_plus, kappa_minus);
  return circular_distance(2.0 * static_cast<double>(repetitions) * j - target_angle);
}

inline ComplexMatrix matrix_power(const ComplexMatrix& m, std::int64_t n) {
  ComplexMatrix result = identity(m.rows());
  ComplexMatrix base = m;
  for (; n > 0; n >>= 1) {
    if (n & 1) result = result * base;
    base = base * base;
  }
  return result;
}

/// Exhaustive scan over admissible (kappa_plus, kappa_minus) and n <= n_max.
/// `threads` > 1 splits the scan; the merge uses the same total order so
/// the result is identical to the serial scan.
inline ControlledPhaseSearchResult search_controlled_phase(double target_angle, double epsilon,
                                                           std::int64_t kappa_plus_max, std::int64_t n_max,
                                                           std::int64_t kappa_prime = 1, unsigned threads = 1) {
  if (!(epsilon > 0.0)) throw DomainError("search_controlled_phase: epsilon must be positive");
  check_winding(kappa_plus_max, "kappa_plus_max");
  check_winding(n_max, "n_max");
  check_winding(kappa_prime, "kappa_prime");

  const auto pairs = admissible_pairs(kappa_plus_max);
  const auto scan = [&](std::size_t begin, std::size_t end) {
    std::optional<ControlledPhaseCandidate> best;
    for (std::size_t i = begin; i < end; ++i) {
      const auto [kp, km] = pairs[i];
      const double j = coupling_from_windings(kp, km);
      for (std::int64_t n = 1; n <= n_max; ++n) {
        const ControlledPhaseCandidate c{kp, km, n, j,
                                         circular_distance(2.0 * static_cast<double>(n) * j - target_angle)};
        if (!best || c.key() < best->key()) best = c;
      }
    }
    return best;
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(pairs.size())));
  std::vector<std::optional<ControlledPhaseCandidate>> partial(threads);
  if (threads == 1) {
    partial[0] = scan(0, pairs.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (pairs.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        const std::size_t b = std::min(pairs.size(), t * chunk);
        partial[t] = scan(b, std::min(pairs.size(), b + chunk));
      });
    for (auto& th : pool) th.join();
  }
  std::optional<ControlledPhaseCandidate> best;
  for (const auto& c : partial)
    if (c && (!best || c->key() < best->key())) best = c;

  ControlledPhaseSearchResult r;
  r.target_angle = target_angle;
  r.epsilon = epsilon;
  r.kappa_plus_max = kappa_plus_max;
  r.n_max = n_max;
  r.kappa_prime = kappa_prime;
  r.best = *best;
  r.exhausted = !(r.best.angle_error < epsilon);

  const ComplexMatrix target = controlled_phase_gate(target_angle);
  r.repeated_controlled =
      controlled_phase_gate(std::remainder(2.0 * static_cast<double>(r.best.repetitions) * r.best.coupling, kTwoPi));
  r.gate_distance = phase_invariant_distance(target, r.repeated_controlled);
  const TwoQubitFactorization f =
      analytic_two_qubit_gate(make_two_qubit_loop(r.best.kappa_plus, r.best.kappa_minus, kappa_prime));
  r.repeated_exact = matrix_power(f.gamma_exact, r.best.repetitions);
  r.exact_distance = phase_invariant_distance(target, r.repeated_exact);
  return r;
}

struct CoverageRow {
  std::int64_t k = 0;
  std::int64_t distinct_points = 0;
  double covering_radius = 0.0;
};

/// Covering radius of {kappa * step mod 2 pi : 0 <= kappa <= K} on the circle.
inline std::vector<CoverageRow> equidistribution_scan(double step, const std::vector<std::int64_t>& k_list) {
  std::vector<CoverageRow> rows;
  for (std::int64_t k : k_list) {
    if (k < 0) throw DomainError("equidistribution_scan: K must be non-negative");
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(k) + 1);
    for (std::int64_t i = 0; i <= k; ++i) {
      double t = std::fmod(static_cast<double>(i) * step, kTwoPi);
      if (t < 0.0) t += kTwoPi;
      pts.push_back(t);
    }
    std::sort(pts.begin(), pts.end());
    double max_gap = 0.0;
    std::int64_t distinct = 1;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const double gap = pts[i] - pts[i - 1];
      if (gap > 1e-9) ++distinct;
      max_gap = std::max(max_gap, gap);
    }
    const double wrap = pts.front() + kTwoPi - pts.back();
    if (pts.size() > 1 && wrap <= 1e-9) --distinct;
    max_gap = std::max(max_gap, wrap);
    rows.push_back({k, distinct, max_gap / 2.0});
  }
  return rows;
}

/// Named-column numeric table, the in-memory form of every CSV we emit.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

enum class Figure { Hadamard, XRotation, ControlledPhase };

/// Hadamard-axis angles 2 kappa pi / sqrt 3.
inline double hadamard_axis_angle(std::int64_t kappa) {
  return 2.0 * static_cast<double>(kappa) * kPi / std::sqrt(3.0);
}

/// fig2: (kappa, theta, sin theta), kappa = 0..20, theta = 2 kappa pi / sqrt 3.
/// fig3: (kappa, theta mod 2 pi, cos, sin), kappa = 0..10, theta = sqrt2 kappa pi
///       (2 kappa pi / sqrt 3 when `caption_convention` is set).
/// fig4: (kappa_plus, kappa_minus, J, 2J mod 2 pi, cos 2J, sin 2J) for kappa_plus = 1..5.
inline Table figure_table(Figure which, bool caption_convention = false) {
  Table t;
  switch (which) {
    case Figure::Hadamard:
      t.header = {"kappa", "theta", "sin_theta"};
      for (std::int64_t k = 0; k <= 20; ++k) {
        const double th = hadamard_axis_angle(k);
        t.rows.push_back({static_cast<double>(k), th, std::sin(th)});
      }
      break;
    case Figure::XRotation:
      t.header = {"kappa", "theta_mod_2pi", "cos_theta", "sin_theta"};
      for (std::int64_t k = 0; k <= 10; ++k) {
        const double th = caption_convention ? hadamard_axis_angle(k) : std::sqrt(2.0) * static_cast<double>(k) * kPi;
        const double red = std::fmod(th, kTwoPi);
        t.rows.push_back({static_cast<double>(k), red, std::cos(th), std::sin(th)});
      }
      break;
    case Figure::ControlledPhase:
      t.header = {"kappa_plus", "kappa_minus", "J", "two_J_mod_2pi", "cos_2J", "sin_2J"};
      for (const auto& [kp, km] : admissible_pairs(5)) {
        const double j = coupling_from_windings(kp, km);
        t.rows.push_back({static_cast<double>(kp), static_cast<double>(km), j, std::fmod(2.0 * j, kTwoPi),
                          std::cos(2.0 * j), std::sin(2.0 * j)});
      }
      break;
  }
  return t;
}

}  // namespace holonome
