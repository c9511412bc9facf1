// Command-line front end. Exit codes: 0 success, 1 domain or I/O error,
// 2 usage error.

#pragma once

#include "holonome/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace holonome::cli {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t pos = std::min(text.find(',', start), text.size());
    std::string cell = text.substr(start, pos - start);
    cell.erase(0, cell.find_first_not_of(' '));
    cell.erase(cell.find_last_not_of(' ') + 1);
    try {
      out.push_back(parse_double(cell));
    } catch (const DomainError&) {
      throw UsageError(std::string(what) + ": '" + text + "' is not a comma-separated list of numbers");
    }
    start = pos + 1;
  }
  return out;
}

inline Vec3 parse_vec3(const std::string& text) {
  const auto v = parse_list(text, "--n");
  if (v.size() != 3) throw UsageError("--n expects three comma-separated components");
  return {v[0], v[1], v[2]};
}

/// Appends `--key value` for every config entry whose flag is not already on the command line.
inline void merge_config(std::vector<std::string>& args) {
  const auto it = std::find(args.begin(), args.end(), "--config");
  if (it == args.end() || std::next(it) == args.end()) return;
  const std::string path = *std::next(it);
  args.erase(it, std::next(it, 2));

  std::ifstream f(path);
  if (!f) throw IoError("cannot read config '" + path + "'");
  Json cfg;
  try {
    cfg = Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw UsageError("config '" + path + "' is not valid JSON: " + e.what());
  }
  if (!cfg.is_object()) throw UsageError("config '" + path + "' must hold a JSON object");

  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
      continue;
    }
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_array()) {
      for (std::size_t i = 0; i < value.size(); ++i)
        text += (i ? "," : "") + (value[i].is_number_float() ? format_double(value[i].get<double>())
                                                             : value[i].dump());
    } else if (value.is_number_float()) {
      text = format_double(value.get<double>());
    } else {
      text = value.dump();
    }
    args.push_back(flag);
    args.push_back(text);
  }
}

inline void deliver(const Json& report, const std::string& out_path, std::ostream& out) {
  const std::string text = dump_deterministic(report);
  if (out_path.empty()) {
    out << text;
  } else {
    write_file(out_path, text);
    out << "wrote " << report.at("kind").get<std::string>() << " report to " << out_path << '\n';
  }
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Holonomic gates from isospectral deformations of Ising dimers", "holonome"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON file of flag defaults (command-line flags take precedence)");

  std::string out_path;
  std::string csv_path;

  // one-qubit
  auto* one = app.add_subcommand("one-qubit", "Single-qubit holonomy for X = i kappa pi n.(s1 + s2)");
  std::string n_text = "1,0,0";
  std::int64_t kappa = 1;
  one->add_option("--n", n_text, "Unit loop direction n as x,y,z");
  one->add_option("--kappa", kappa, "Winding number");
  one->add_option("--out", out_path, "Write the JSON report here");

  // two-qubit
  auto* two = app.add_subcommand("two-qubit", "Two-qubit holonomy for windings (kappa_plus, kappa_minus, kappa')");
  std::int64_t kp = 2, km = 3, kprime = 1;
  two->add_option("--kp", kp, "kappa_plus");
  two->add_option("--km", km, "kappa_minus");
  two->add_option("--kprime", kprime, "kappa'");
  two->add_option("--out", out_path, "Write the JSON report here");

  // search
  auto* search = app.add_subcommand("search", "Approximate a target gate from the discrete gate set");
  std::string target = "hadamard";
  double theta = 0.0;
  double eps = 0.05;
  std::int64_t kappa_max = 200, kp_max = 10, n_max = 500;
  unsigned threads = 1;
  auto* theta_opt = search->add_option("--theta", theta, "Target angle in radians (rx, ry, cphase)");
  search->add_option("--target", target, "hadamard | rx | ry | cphase | cz")
      ->check(CLI::IsMember({"hadamard", "rx", "ry", "cphase", "cz"}));
  search->add_option("--eps", eps, "Angle tolerance");
  search->add_option("--kappa-max", kappa_max, "Largest single-qubit winding number");
  search->add_option("--kp-max", kp_max, "Largest kappa_plus");
  search->add_option("--n-max", n_max, "Largest repetition count");
  search->add_option("--kprime", kprime, "kappa' of the two-qubit loop");
  search->add_option("--threads", threads, "Worker threads for the two-qubit scan");
  search->add_option("--out", out_path, "Write the JSON report here");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Adiabatic convergence of the exact propagator to the holonomy");
  std::string model_name = "one";
  std::string times_text = "10,100,1000";
  int ode_steps = 0;
  sweep->add_option("--model", model_name, "one | two")->check(CLI::IsMember({"one", "two"}));
  sweep->add_option("--n", n_text, "Loop direction (one-qubit)");
  sweep->add_option("--kappa", kappa, "Winding number (one-qubit)");
  sweep->add_option("--kp", kp, "kappa_plus (two-qubit)");
  sweep->add_option("--km", km, "kappa_minus (two-qubit)");
  sweep->add_option("--kprime", kprime, "kappa' (two-qubit)");
  sweep->add_option("--times", times_text, "Comma-separated total times T in units of 1/J1");
  sweep->add_option("--ode-steps", ode_steps, "Cross-check every run with RK4 using this many steps");
  sweep->add_option("--csv", csv_path, "Write T,fidelity,leakage here");
  sweep->add_option("--out", out_path, "Write the JSON report here");

  // figure
  auto* figure = app.add_subcommand("figure", "Tabulate figure data as CSV");
  std::string which;
  bool caption = false;
  figure->add_option("which", which, "fig2 | fig3 | fig4")->required()->check(CLI::IsMember({"fig2", "fig3", "fig4"}));
  figure->add_option("--csv", csv_path, "Write the CSV here instead of stdout");
  figure->add_flag("--caption-convention", caption, "fig3: use theta = 2 kappa pi / sqrt 3");

  // audit
  auto* audit = app.add_subcommand("audit", "Audit the two-qubit factorization into local and controlled parts");
  bool force_j0 = false;
  audit->add_option("--kp", kp, "kappa_plus");
  audit->add_option("--km", km, "kappa_minus");
  audit->add_option("--kprime", kprime, "kappa'");
  audit->add_flag("--force-j0", force_j0, "Force J = 0 (commuting limit)");
  audit->add_option("--out", out_path, "Write the JSON report here");

  try {
    merge_config(args);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (one->parsed()) {
      const Json report = one_qubit_report(make_one_qubit_loop(parse_vec3(n_text), kappa));
      deliver(report, out_path, out);
    } else if (two->parsed()) {
      deliver(two_qubit_report(make_two_qubit_loop(kp, km, kprime)), out_path, out);
    } else if (search->parsed()) {
      Json inputs = {{"target", target}, {"eps", eps}};
      Json outputs;
      if (target == "hadamard" || target == "rx" || target == "ry") {
        if (target != "hadamard" && theta_opt->count() == 0) throw UsageError("--theta is required for rx/ry");
        RotationSearchResult r;
        if (target == "hadamard") {
          // |sin theta| = 1: compare angles modulo pi (global phase).
          r = search_rotation(RotationAxis::hadamard(), kPi / 2.0, eps, kappa_max, kPi);
        } else {
          inputs["theta"] = theta;
          r = search_rotation(target == "rx" ? RotationAxis::x() : RotationAxis::y(), theta, eps, kappa_max);
        }
        inputs["kappa_max"] = kappa_max;
        outputs = to_json(r);
        out << "kappa = " << r.kappa << ", angle error = " << format_double(r.angle_error)
            << (r.exhausted ? " (exhausted)" : "") << '\n';
      } else {
        if (target == "cz") {
          theta = kPi / 2.0;
        } else if (theta_opt->count() == 0) {
          throw UsageError("--theta is required for cphase");
        }
        inputs["theta"] = theta;
        inputs["kappa_plus_max"] = kp_max;
        inputs["n_max"] = n_max;
        inputs["kappa_prime"] = kprime;
        const auto r = search_controlled_phase(theta, eps, kp_max, n_max, kprime, threads);
        outputs = to_json(r);
        out << "(kappa_plus, kappa_minus, n) = (" << r.best.kappa_plus << ", " << r.best.kappa_minus << ", "
            << r.best.repetitions << "), angle error = " << format_double(r.best.angle_error)
            << (r.exhausted ? " (exhausted)" : "") << '\n';
      }
      if (!out_path.empty()) write_file(out_path, dump_deterministic(make_report("search", inputs, outputs)));
      else out << dump_deterministic(make_report("search", inputs, outputs));
    } else if (sweep->parsed()) {
      const std::vector<double> times = parse_list(times_text, "--times");
      SpinModel model;
      DeformationGenerator gen;
      Json inputs = {{"times", times}, {"ode_steps", ode_steps}};
      if (model_name == "one") {
        model = build_one_dimer(1.0);
        gen = one_qubit_generator(make_one_qubit_loop(parse_vec3(n_text), kappa));
        inputs["system"] = "one-qubit";
        inputs["n"] = to_json(gen.one_qubit().n);
        inputs["kappa"] = kappa;
      } else {
        model = build_two_dimer(1.0, 1.0);
        gen = two_qubit_generator(make_two_qubit_loop(kp, km, kprime));
        inputs.update(two_qubit_loop_json(gen.two_qubit()));
        inputs["system"] = "two-qubit";
      }
      const HolonomyGate gate = holonomy(gen, model);
      const auto runs = adiabatic_sweep(model, gen, gate, times, ode_steps);
      const Table table = sweep_table(runs);
      Json ode = Json::array();
      for (const auto& r : runs) ode.push_back(r.ode_deviation ? Json(*r.ode_deviation) : Json(nullptr));
      const Json report = make_report("sweep", inputs, {{"table", to_json(table)}, {"ode_deviation", ode}});
      if (!csv_path.empty()) emit_csv(table, csv_path);
      if (!out_path.empty()) write_file(out_path, dump_deterministic(report));
      if (csv_path.empty() && out_path.empty()) out << to_csv(table);
    } else if (figure->parsed()) {
      const Figure f = which == "fig2" ? Figure::Hadamard : which == "fig3" ? Figure::XRotation : Figure::ControlledPhase;
      const Table table = figure_table(f, caption);
      if (csv_path.empty()) out << to_csv(table);
      else emit_csv(table, csv_path);
    } else if (audit->parsed()) {
      const TwoQubitLoop loop = force_j0 ? make_forced_coupling_loop(kp, kprime, 0.0) : make_two_qubit_loop(kp, km, kprime);
      const TwoQubitFactorization f = analytic_two_qubit_gate(loop);
      const Json report = emit_audit(f);
      deliver(report, out_path, out);
      if (!out_path.empty())
        out << "verdict: " << report["outputs"]["verdict"].get<std::string>() << ", distance "
            << format_double(f.discrepancy) << '\n';
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

inline int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(std::move(args), std::cout, std::cerr);
}

}  // namespace holonome::cli
