// CSV and JSON serialization.
//
// Output is byte-deterministic: object keys sorted, floats written with 17
// significant digits through std::to_chars (locale independent), LF line
// endings, and no timestamps.

#pragma once

#include "holonome/adiabatic.hpp"
#include "holonome/deformation.hpp"
#include "holonome/holonomy.hpp"
#include "holonome/synthesis.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

#ifndef HOLONOME_VERSION
#define HOLONOME_VERSION "1.0.0"
#endif

namespace holonome {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = HOLONOME_VERSION;
inline constexpr double kAuditThreshold = 1e-8;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_double(double v) {
  if (!std::isfinite(v)) throw DomainError("cannot serialize a non-finite value");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw DomainError("malformed number '" + std::string(s) + "'");
  return v;
}

// ---------------------------------------------------------------- CSV

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.header.size(); ++i) out += (i ? "," : "") + t.header[i];
  out += '\n';
  for (const auto& row : t.rows) {
    if (row.size() != t.header.size()) throw DomainError("table row width does not match its header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

inline Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (std::size_t pos; (pos = line.find(',', start)) != std::string::npos; start = pos + 1)
      cells.push_back(line.substr(start, pos - start));
    cells.push_back(line.substr(start));
    if (first) {
      t.header = std::move(cells);
      first = false;
      continue;
    }
    if (cells.size() != t.header.size()) throw DomainError("CSV row width does not match its header");
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_double(c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << contents;
  if (!f.flush()) throw IoError("failed writing '" + path + "'");
}

inline void emit_csv(const Table& t, const std::string& path) { write_file(path, to_csv(t)); }

// ---------------------------------------------------------------- JSON

namespace detail {
inline void dump_json(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map ordering: sorted keys
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(it.key()).dump() + ": ";
        dump_json(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
      if (j.empty() || flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump_json(j[i], out, indent + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        dump_json(j[i], out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}
}  // namespace detail

inline std::string dump_deterministic(const Json& j) {
  std::string out;
  detail::dump_json(j, out, 0);
  out += '\n';
  return out;
}

inline Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

/// Rows of [re, im] pairs.
inline Json to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json to_json(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

inline Json to_json(const LocalInvariants& g) {
  return {{"G1", to_json(g.g1)}, {"G2", g.g2}};
}

inline Json to_json(const LeakageAudit& a) {
  Json entries = Json::array();
  for (const auto& e : a.entries)
    entries.push_back({{"bra", e.bra},
                       {"operator", e.op},
                       {"ket", e.ket},
                       {"value", to_json(e.value)},
                       {"expected", to_json(e.expected)},
                       {"passed", e.passed}});
  return {{"entries", entries}, {"passed", a.passed}, {"tolerance", a.tolerance}};
}

inline Json to_json(const Table& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) rows.push_back(r);
  return {{"columns", t.header}, {"rows", rows}};
}

inline Json make_report(const std::string& kind, Json inputs, Json outputs) {
  return {{"kind", kind},
          {"inputs", std::move(inputs)},
          {"outputs", std::move(outputs)},
          {"tool_version", kToolVersion},
          {"deterministic", true}};
}

inline Json one_qubit_report(const OneQubitLoop& loop) {
  const SpinModel model = build_one_dimer(1.0);
  const DeformationGenerator gen = one_qubit_generator(loop);
  const Connection conn = connection_on_ground_space(gen, model);
  const HolonomyGate numeric = holonomy(conn, gen.loop);
  const HolonomyGate analytic = analytic_one_qubit_gate(loop);
  Json outputs = {
      {"theta", loop.theta()},
      {"m", to_json(loop.m())},
      {"global_phase_angle", -loop.omega() * loop.n[2]},
      {"connection_coding_block", to_json(conn.coding_block)},
      {"ground_labels", conn.ground_labels},
      {"gamma", to_json(numeric.gamma)},
      {"gamma_analytic", to_json(analytic.gamma)},
      {"analytic_vs_numeric_distance", phase_invariant_distance(numeric.gamma, analytic.gamma)},
      {"closure_residual", gen.closure_residual},
      {"commutator_norm", gen.commutator_norm},
      {"leakage_audit", to_json(leakage_audit(gen, model))},
  };
  return make_report("holonomy", {{"system", "one-qubit"}, {"n", to_json(loop.n)}, {"kappa", loop.kappa}},
                     std::move(outputs));
}

inline Json two_qubit_loop_json(const TwoQubitLoop& loop) {
  return {{"kappa_plus", loop.kappa_plus},
          {"kappa_minus", loop.kappa_minus},
          {"kappa_prime", loop.kappa_prime},
          {"J", loop.coupling},
          {"forced_coupling", loop.forced_coupling}};
}

inline Json two_qubit_report(const TwoQubitLoop& loop) {
  const SpinModel model = build_two_dimer(1.0, 1.0);
  const DeformationGenerator gen = two_qubit_generator(loop);
  const Connection conn = connection_on_ground_space(gen, model);
  const HolonomyGate gate = holonomy(conn, gen.loop);
  const ClosureBlocks blocks = closure_blocks(loop);
  Json outputs = {
      {"J", loop.coupling},
      {"n2", to_json(loop.n2())},
      {"nu_plus", blocks.nu_plus},
      {"nu_minus", blocks.nu_minus},
      {"connection_coding_block", to_json(conn.coding_block)},
      {"ground_labels", conn.ground_labels},
      {"gamma", to_json(gate.gamma)},
      {"closure_residual", gen.closure_residual},
      {"closure_block_residual", blocks.block_residual()},
      {"commutator_norm", gen.commutator_norm},
      {"leakage_audit", to_json(leakage_audit(gen, model))},
  };
  Json inputs = two_qubit_loop_json(loop);
  inputs["system"] = "two-qubit";
  return make_report("holonomy", std::move(inputs), std::move(outputs));
}

inline bool audit_consistent(const TwoQubitFactorization& f) {
  return f.discrepancy < kAuditThreshold && f.invariant_gap < kAuditThreshold;
}

/// Factorization audit: exact holonomy against (-1)^kappa' Gamma^LU Gamma^C.
inline Json emit_audit(const TwoQubitFactorization& f) {
  Json outputs = {
      {"gamma_exact", to_json(f.gamma_exact)},
      {"block_form_error", f.block_form_error},
      {"claimed_factorization", to_json(f.claimed_factorization)},
      {"distance_exact_to_factorization", f.discrepancy},
      {"nu", f.nu},
      {"nu_k", to_json(f.nu_k)},
      {"kappa1_interpretation", f.kappa1_interpretation},
      {"invariants_gamma_exact", to_json(f.invariants_exact)},
      {"invariants_controlled_phase", to_json(f.invariants_controlled)},
      {"invariant_comparison",
       {{"distance", f.invariant_gap}, {"equal", f.invariant_gap < kAuditThreshold}}},
      {"threshold", kAuditThreshold},
      {"verdict", audit_consistent(f) ? "consistent" : "inconsistent"},
  };
  return make_report("audit", two_qubit_loop_json(f.loop), std::move(outputs));
}

inline Json to_json(const RotationSearchResult& r) {
  Json ranked = Json::array();
  for (const auto& c : r.ranked) ranked.push_back({{"kappa", c.kappa}, {"theta", c.theta}, {"angle_error", c.angle_error}});
  return {{"axis", r.axis.name},
          {"m", to_json(r.axis.m)},
          {"kappa", r.kappa},
          {"theta", r.theta},
          {"angle_error", r.angle_error},
          {"gate_distance", r.gate_distance},
          {"gamma", to_json(r.gate.gamma)},
          {"exhausted", r.exhausted},
          {"ranked", ranked}};
}

inline Json to_json(const ControlledPhaseSearchResult& r) {
  return {{"kappa_plus", r.best.kappa_plus},
          {"kappa_minus", r.best.kappa_minus},
          {"repetitions", r.best.repetitions},
          {"kappa_prime", r.kappa_prime},
          {"J", r.best.coupling},
          {"angle_error", r.best.angle_error},
          {"gate_distance", r.gate_distance},
          {"exhausted", r.exhausted},
          {"repeated_controlled_phase", to_json(r.repeated_controlled)},
          {"repeated_exact_holonomy", to_json(r.repeated_exact)},
          {"exact_distance", r.exact_distance}};
}

inline Json to_json(const Su2Program& p) {
  Json steps = Json::array();
  for (const auto& s : p.steps)
    steps.push_back({{"axis", std::string(1, s.axis)},
                     {"target_angle", s.target_angle},
                     {"kappa", s.search.kappa},
                     {"angle_error", s.search.angle_error},
                     {"gate_distance", s.search.gate_distance}});
  return {{"steps", steps},
          {"composite", to_json(p.composite)},
          {"distance", p.distance},
          {"component_distance_sum", p.component_distance_sum},
          {"exhausted", p.exhausted}};
}

inline Table sweep_table(const std::vector<AdiabaticRun>& runs) {
  Table t{{"T", "fidelity", "leakage"}, {}};
  for (const auto& r : runs) t.rows.push_back({r.total_time, r.fidelity, r.leakage});
  return t;
}

}  // namespace holonome
