#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <optional>
#include <set>

#include "resokit/bound_states.hpp"
#include "resokit/error.hpp"
#include "resokit/io.hpp"
#include "resokit/phase_shift_model.hpp"
#include "resokit/scattering.hpp"
#include "resokit/two_channel.hpp"
#include "resokit/units.hpp"
#include "verify.hpp"

namespace resokit::cli {

namespace {

using json = nlohmann::json;

struct Flags {
  std::optional<double> a, rstar, eps, lambda, emol, mass, k, min, max, qmax, threshold;
  std::optional<int> steps;
  std::optional<std::string> coeffs, units, out, species, config;
  std::string format = "csv";
  bool log = false;
  bool identical = false;
  std::uint64_t seed = io::default_seed;
};

const std::set<std::string> value_keys = {"a",     "rstar", "coeffs", "eps",     "lambda",  "emol",
                                          "mass",  "units", "out",    "format",  "min",     "max",
                                          "steps", "k",     "qmax",   "species", "threshold", "seed"};
const std::set<std::string> switch_keys = {"log", "identical"};

struct Result {
  io::Table table;
  json residuals = json::object();
  std::optional<json> json_outputs;  // replaces the row objects in JSON mode
  int exit_code = ok;
};

json inputs_of(const std::string& command, const Flags& f) {
  json in;
  in["command"] = command;
  const auto put = [&in](const char* key, const auto& opt) {
    if (opt) in[key] = *opt;
  };
  put("a", f.a);
  put("rstar", f.rstar);
  put("coeffs", f.coeffs);
  put("eps", f.eps);
  put("lambda", f.lambda);
  put("emol", f.emol);
  put("mass", f.mass);
  put("k", f.k);
  put("min", f.min);
  put("max", f.max);
  put("steps", f.steps);
  put("qmax", f.qmax);
  put("threshold", f.threshold);
  put("units", f.units);
  put("species", f.species);
  in["log"] = f.log;
  in["identical"] = f.identical;
  in["seed"] = f.seed;
  return in;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void emit(std::ostream& out, const std::string& format, const json& inputs, const Result& r) {
  if (format == "csv") {
    io::write_csv(out, r.table);
    return;
  }
  json report;
  report["version"] = std::string(version);
  report["timestamp"] = utc_timestamp();
  report["inputs"] = inputs;
  if (r.json_outputs) {
    report["outputs"] = *r.json_outputs;
  } else {
    json rows = json::array();
    for (const auto& row : r.table.rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < row.size() && i < r.table.columns.size(); ++i) {
        if (const double* d = std::get_if<double>(&row[i])) {
          obj[r.table.columns[i]] = *d;
        } else {
          obj[r.table.columns[i]] = std::get<std::string>(row[i]);
        }
      }
      rows.push_back(std::move(obj));
    }
    report["outputs"] = std::move(rows);
  }
  report["residuals"] = r.residuals;
  out << report.dump(2) << '\n';
}

void require_natural(const Flags& f, std::string_view command) {
  if (f.units && units::parse_mode(*f.units) != units::Mode::natural) {
    throw Error(ErrorCode::invalid_input,
                std::string(command) + " works in natural units (hbar = m = 1) only");
  }
}

PhaseShiftModel model_from(const Flags& f) {
  if (f.coeffs) {
    if (f.a || f.rstar) throw Error(ErrorCode::invalid_input, "give either --coeffs or --a/--rstar");
    auto c = resokit::detail::parse_list(*f.coeffs);
    if (c.empty()) throw Error(ErrorCode::invalid_input, "--coeffs needs at least one value");
    return PhaseShiftModel(std::move(c));
  }
  if (!f.a) throw Error(ErrorCode::invalid_input, "model needs --coeffs or --a [--rstar]");
  return PhaseShiftModel::from_effective_range(*f.a, f.rstar.value_or(0.0));
}

std::vector<double> grid_from(const Flags& f, io::SweepVariable variable, int default_steps) {
  if (!f.min || !f.max) throw Error(ErrorCode::invalid_input, "sweep needs --min and --max");
  io::SweepPlan plan{variable, *f.min, *f.max, f.steps.value_or(default_steps),
                     f.log ? io::SweepScale::log : io::SweepScale::linear};
  return plan.values();
}

Result run_amplitude(const Flags& f, bool phase_only) {
  require_natural(f, phase_only ? "phase-shift" : "amplitude");
  const auto model = model_from(f);
  const auto ks = f.k ? std::vector<double>{*f.k} : grid_from(f, io::SweepVariable::k, 50);
  Result r;
  if (phase_only) {
    r.table.columns = {"k", "E", "delta", "k_cot_delta"};
  } else {
    r.table.columns = {"k", "E", "Re_f", "Im_f", "delta", "sigma"};
  }
  double worst = 0.0;
  for (double k : ks) {
    if (phase_only) {
      r.table.rows.push_back({k, k * k, phase_shift(model, k), model.g(k * k)});
      continue;
    }
    const auto f_k = amplitude(model, k);
    const double delta = k > 0.0 ? phase_shift(model, k) : std::nan("");
    const double sigma = k > 0.0 ? cross_section(model, k, f.identical) : std::nan("");
    if (k > 0.0) worst = std::max(worst, unitarity_residual(model, k));
    r.table.rows.push_back({k, k * k, f_k.real(), f_k.imag(), delta, sigma});
  }
  if (!phase_only) r.residuals["unitarity"] = worst;
  return r;
}

Result run_bound_states(const Flags& f, bool with_check, std::ostream& err) {
  require_natural(f, with_check ? "modified-norm" : "bound-state");
  const auto model = model_from(f);
  Diagnostics diag;
  const auto states = find_bound_states(model, f.qmax.value_or(100.0), &diag);
  for (const auto& w : diag.warnings) err << "warning: " << w << '\n';
  Result r;
  r.table.columns = {"q", "E", "A2", "norm_sign"};
  if (with_check) r.table.columns.push_back("residual");
  double worst = 0.0;
  for (const auto& s : states) {
    std::vector<io::Cell> row{s.q, s.energy, s.A2, std::string(to_string(s.norm_sign))};
    if (with_check) {
      const double res = modified_norm_check(model, s);
      worst = std::max(worst, res);
      row.emplace_back(res);
    }
    r.table.rows.push_back(std::move(row));
  }
  if (with_check) r.residuals["modified_norm"] = worst;
  return r;
}

two_channel::Params params_from(const Flags& f, double eps) {
  const double mass = f.mass.value_or(1.0);
  if (f.lambda || f.emol) {
    if (f.a || f.rstar) {
      throw Error(ErrorCode::invalid_input, "give either --lambda/--emol or --a/--rstar");
    }
    if (!f.lambda || !f.emol) throw Error(ErrorCode::invalid_input, "--lambda needs --emol");
    two_channel::Params p{*f.lambda, *f.emol, eps, mass};
    two_channel::validate(p);
    return p;
  }
  if (!f.a || !f.rstar) {
    throw Error(ErrorCode::invalid_input, "two-channel needs --lambda/--emol or --a/--rstar");
  }
  return two_channel::params_for(*f.a, *f.rstar, eps, mass);
}

Result run_two_channel(const Flags& f, const std::string& mode) {
  require_natural(f, "two-channel");
  Result r;
  if (mode == "params") {
    if (!f.eps) throw Error(ErrorCode::invalid_input, "two-channel params needs --eps");
    const auto p = params_from(f, *f.eps);
    const auto eff = two_channel::effective_params(p);
    r.table.columns = {"eps", "lambda", "emol", "mass", "a_eps", "rstar_eps", "a_fit", "rstar_fit"};
    r.table.rows.push_back({p.eps, p.lambda, p.e_mol, p.mass, eff.a_eps, eff.rstar_eps, eff.a_fit, eff.rstar_fit});
    r.residuals["rel_error_a"] = eff.rel_error_a;
    r.residuals["rel_error_rstar"] = eff.rel_error_rstar;
    return r;
  }
  std::vector<double> eps_values;
  if (mode == "bound") {
    if (!f.eps) throw Error(ErrorCode::invalid_input, "two-channel bound needs --eps");
    eps_values = {*f.eps};
  } else {
    eps_values = grid_from(f, io::SweepVariable::eps, 8);
  }
  r.table.columns = {"eps", "a_eps", "rstar_eps", "E_bound", "beta2", "A2_tail", "res_identity"};
  double worst = 0.0;
  for (double eps : eps_values) {
    const auto p = params_from(f, eps);
    const auto eff = two_channel::effective_params(p);
    const auto s = two_channel::bound_state(p);
    const auto id = two_channel::product_identity_check(p, s, p, s);
    worst = std::max(worst, id.residual1);
    r.table.rows.push_back({eps, eff.a_eps, eff.rstar_eps, s.energy, s.beta2, s.A_tail * s.A_tail, id.residual1});
  }
  r.residuals["max_res_identity"] = worst;
  return r;
}

Result run_feshbach(const Flags& f, const std::string& mode) {
  if (!f.species) throw Error(ErrorCode::invalid_input, "feshbach needs --species FILE");
  const auto rows = io::load_species(*f.species);
  const auto mode_units = units::parse_mode(f.units.value_or("atomic"));
  Result r;
  for (const auto& si_res : rows) {
    units::UnitSystem system = units::UnitSystem::si_units();
    if (mode_units == units::Mode::atomic) system = units::UnitSystem::atomic();
    if (mode_units == units::Mode::natural) system = units::natural_units_for(si_res);
    const auto res = units::convert(si_res, system);
    if (mode == "classify") {
      r.table.columns = {"species", "rstar", "r_vdw", "ratio", "class"};
      const double rstar = units::width_radius(res);
      const double rvdw = units::vdw_length(res);
      const auto cls = units::classify_resonance(res, f.threshold.value_or(1.0));
      r.table.rows.push_back({res.species, rstar, rvdw, std::fabs(rstar) / rvdw, std::string(to_string(cls))});
    } else {
      // Field grid in gauss, scattering length in the selected system.
      r.table.columns = {"species", "B_G", "a"};
      const units::UnitSystem si = units::UnitSystem::si_units();
      for (double b_gauss : grid_from(f, io::SweepVariable::field, 50)) {
        const double b = units::convert(b_gauss * units::si::gauss, units::Dimension::field, si, system);
        r.table.rows.push_back({res.species, b_gauss, units::scattering_length_of_field(res, b)});
      }
    }
  }
  if (r.table.columns.empty()) {
    r.table.columns = mode == "classify" ? std::vector<std::string>{"species", "rstar", "r_vdw", "ratio", "class"}
                                         : std::vector<std::string>{"species", "B_G", "a"};
  }
  return r;
}

Result run_verify(const Flags& f, const std::string& group) {
  verify::Options opt;
  opt.seed = f.seed;
  const auto results = verify::run(verify::parse_group(group), opt);
  Result r;
  r.table.columns = {"id", "name", "passed", "value", "threshold", "seconds"};
  json outputs = json::array();
  for (const auto& c : results) {
    r.table.rows.push_back({static_cast<double>(c.id), c.name, std::string(c.passed ? "true" : "false"),
                            c.value, c.threshold, c.seconds});
    r.residuals["criterion_" + std::to_string(c.id)] = c.value;
    outputs.push_back(verify::to_json(c));
    if (!c.passed) r.exit_code = verify_breach;
  }
  r.json_outputs = std::move(outputs);
  return r;
}

bool has_flag(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  return std::any_of(args.begin(), args.end(), [&flag](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Appends config-file keys the command line did not set.
std::vector<std::string> with_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (!path) {
    if (const char* env = std::getenv("RESOKIT_CONFIG"); env && *env) path = env;
  }
  if (!path) return args;
  for (const auto& [key, value] : io::load_config(*path)) {
    if (has_flag(args, key)) continue;
    if (switch_keys.count(key)) {
      if (value == "true" || value == "1" || value == "yes") {
        args.push_back("--" + key);
      } else if (value != "false" && value != "0" && value != "no") {
        throw Error(ErrorCode::parse_error, *path + ": '" + key + "' expects true or false");
      }
    } else if (value_keys.count(key)) {
      args.push_back("--" + key + "=" + value);
    } else {
      throw Error(ErrorCode::parse_error, *path + ": unknown key '" + key + "'");
    }
  }
  return args;
}

int exit_for(const Error& e) { return is_input_error(e.code()) ? input_error : numerical_error; }

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Resonance-model toolkit: contact models, two-channel Feshbach model, checks", "resokit"};
  app.set_version_flag("--version", std::string(version));
  app.require_subcommand(1);

  Flags f;
  app.add_option("--a", f.a, "scattering length");
  app.add_option("--rstar", f.rstar, "width radius R*");
  app.add_option("--coeffs", f.coeffs, "g(E) coefficients c0,c1,...");
  app.add_option("--eps", f.eps, "regulator width");
  app.add_option("--lambda", f.lambda, "two-channel coupling");
  app.add_option("--emol", f.emol, "molecular energy");
  app.add_option("--mass", f.mass, "atom mass (two-channel)");
  app.add_option("--units", f.units, "natural|si|atomic")->check(CLI::IsMember({"natural", "si", "atomic"}));
  app.add_option("--out", f.out, "write output here instead of stdout");
  app.add_option("--format", f.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--min", f.min, "sweep start");
  app.add_option("--max", f.max, "sweep end");
  app.add_option("--steps", f.steps, "sweep points")->check(CLI::PositiveNumber);
  app.add_flag("--log", f.log, "geometric sweep");
  app.add_option("--k", f.k, "single momentum");
  app.add_option("--qmax", f.qmax, "bound-state search limit");
  app.add_option("--species", f.species, "species CSV file");
  app.add_option("--threshold", f.threshold, "narrow/broad threshold on |R*|/R_vdW");
  app.add_flag("--identical", f.identical, "identical-particle cross section");
  app.add_option("--seed", f.seed, "seed for randomized checks");
  app.add_option("--config", f.config, "key = value config file (also RESOKIT_CONFIG)");

  auto* amplitude_cmd = app.add_subcommand("amplitude", "scattering amplitude, phase shift, cross section");
  auto* phase_cmd = app.add_subcommand("phase-shift", "phase shift and k cot(delta)");
  auto* bound_cmd = app.add_subcommand("bound-state", "bound states and their normalization");
  auto* norm_cmd = app.add_subcommand("modified-norm", "bound states with the modified-norm residual");
  std::string tc_mode;
  auto* tc_cmd = app.add_subcommand("two-channel", "two-channel model: params | sweep | bound");
  tc_cmd->add_option("mode", tc_mode)->required()->check(CLI::IsMember({"params", "sweep", "bound"}));
  std::string fb_mode;
  auto* fb_cmd = app.add_subcommand("feshbach", "species data: sweep | classify");
  fb_cmd->add_option("mode", fb_mode)->required()->check(CLI::IsMember({"sweep", "classify"}));
  std::string group = "all";
  auto* verify_cmd = app.add_subcommand("verify", "invariant battery: all | orthogonality | unitarity | mapping | identity | feshbach");
  verify_cmd->add_option("group", group)->check(
      CLI::IsMember({"all", "orthogonality", "unitarity", "mapping", "identity", "feshbach"}));
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    const auto args = with_config(raw_args);
    std::vector<const char*> argv{"resokit"};
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForVersion&) {
    out << version << '\n';
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return input_error;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return input_error;
  }

  std::string command;
  try {
    Result r;
    if (amplitude_cmd->parsed()) {
      command = "amplitude";
      r = run_amplitude(f, false);
    } else if (phase_cmd->parsed()) {
      command = "phase-shift";
      r = run_amplitude(f, true);
    } else if (bound_cmd->parsed()) {
      command = "bound-state";
      r = run_bound_states(f, false, err);
    } else if (norm_cmd->parsed()) {
      command = "modified-norm";
      r = run_bound_states(f, true, err);
    } else if (tc_cmd->parsed()) {
      command = "two-channel " + tc_mode;
      r = run_two_channel(f, tc_mode);
    } else if (fb_cmd->parsed()) {
      command = "feshbach " + fb_mode;
      r = run_feshbach(f, fb_mode);
    } else {
      command = "verify " + group;
      r = run_verify(f, group);
    }
    const json inputs = inputs_of(command, f);
    if (f.out) {
      std::ofstream file(*f.out);
      if (!file) throw Error(ErrorCode::invalid_input, "cannot write " + *f.out);
      emit(file, f.format, inputs, r);
    } else {
      emit(out, f.format, inputs, r);
    }
    if (r.exit_code == verify_breach) err << "verify: residual breach\n";
    return r.exit_code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return numerical_error;
  }
}

}  // namespace resokit::cli
