#pragma once

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "entropygate/convexity.hpp"
#include "entropygate/eos.hpp"
#include "entropygate/euler1d.hpp"
#include "entropygate/propcheck.hpp"
#include "entropygate/report.hpp"
#include "entropygate/table_io.hpp"
#include "entropygate/thermo.hpp"

namespace entropygate::cli {

/// Process exit codes; part of the tool's interface.
enum ExitCode : int { kOk = 0, kViolation = 1, kUsage = 2, kSimulationAbort = 3 };

struct UsageError : Error {
  using Error::Error;
};

struct ModelFlags {
  std::string kind = "polytropic";
  std::optional<double> gamma;
  double cv = 1.0;
  double m0 = 1.0;
  double v0 = 1.0;
  double e0 = 1.0;
  std::string table;
};

inline EosModel build_model(const ModelFlags& f) {
  PolytropicParams p{f.gamma.value_or(1.4), f.cv, f.m0, f.v0, f.e0};
  if (f.kind == "polytropic") return EosModel::polytropic(p);
  if (f.kind == "pathological") {
    p.gamma = f.gamma.value_or(0.8);
    return EosModel::pathological_gamma(p);
  }
  if (f.kind == "neg-temp") return EosModel::negative_temperature();
  if (f.kind == "tabulated") {
    if (f.table.empty()) throw UsageError("--model tabulated needs --table PATH");
    return load_tabulated(f.table);
  }
  throw UsageError("unknown model '" + f.kind + "'");
}

/// "lo:hi"
inline Interval parse_interval(const std::string& text) {
  const auto colon = text.find(':', 1);
  if (colon == std::string::npos) throw UsageError("interval '" + text + "' is not of the form lo:hi");
  try {
    std::size_t u1 = 0, u2 = 0;
    const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
    const Interval iv{std::stod(a, &u1), std::stod(b, &u2)};
    if (u1 != a.size() || u2 != b.size()) throw std::invalid_argument(text);
    return iv;
  } catch (const std::logic_error&) {
    throw UsageError("interval '" + text + "' is not of the form lo:hi");
  }
}

/// "lo:hi,lo:hi,..." with exactly `dim` intervals, each with lo < hi.
template <std::size_t Dim>
std::array<Interval, Dim> parse_box(const std::string& text, const char* what) {
  std::array<Interval, Dim> box{};
  std::stringstream ss(text);
  std::string part;
  std::size_t k = 0;
  while (std::getline(ss, part, ',')) {
    if (k == Dim) throw UsageError(std::string(what) + ": expected " + std::to_string(Dim) + " intervals");
    box[k++] = parse_interval(part);
  }
  if (k != Dim) throw UsageError(std::string(what) + ": expected " + std::to_string(Dim) + " intervals");
  for (std::size_t i = 0; i < Dim; ++i)
    if (!(box[i].lo < box[i].hi))
      throw UsageError(std::string(what) + ": interval " + std::to_string(i + 1) + " has min >= max");
  return box;
}

inline std::vector<std::size_t> parse_counts(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(part, &used);
      if (used != part.size() || v <= 0) throw std::invalid_argument(part);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::logic_error&) {
      throw UsageError("cell count '" + part + "' is not a positive integer");
    }
  }
  if (out.empty()) throw UsageError("no cell count given");
  return out;
}

inline std::uint64_t default_seed() {
  if (const char* env = std::getenv("ENTROPYGATE_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::logic_error&) {
    }
    throw UsageError(std::string("ENTROPYGATE_SEED is not an unsigned integer: ") + env);
  }
  return 42;
}

namespace detail {

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void header(ReportDocument& doc, const std::string& command, const EosModel& model, bool timestamp) {
  doc.set("tool.version", kToolVersion);
  doc.set("command", command);
  if (timestamp) doc.set("timestamp", utc_timestamp());
  doc.set("model.kind", to_string(model.kind()));
  doc.set("model.descriptor", model.describe());
  if (auto p = model.polytropic_params()) {
    doc.set("model.gamma", p->gamma);
    doc.set("model.cv", p->cv);
    doc.set("model.m0", p->m0);
    doc.set("model.v0", p->v0);
    doc.set("model.e0", p->e0);
  }
}

template <std::size_t N>
void set_point(ReportDocument& doc, const std::string& key, const std::array<double, N>& x) {
  for (std::size_t i = 0; i < N; ++i) doc.set(key + "." + std::to_string(i), x[i]);
}

inline void set_report(ReportDocument& doc, const std::string& prefix, const ConvexityReport& r) {
  doc.set(prefix + ".verdict", to_string(r.verdict));
  doc.set(prefix + ".worst_eigenvalue", r.worst_eigenvalue);
  set_point(doc, prefix + ".worst_point", r.worst_point);
  doc.set(prefix + ".tolerance_used", r.tolerance_used);
  doc.set(prefix + ".min_eigenvalue", r.min_eigenvalue);
  doc.set(prefix + ".max_eigenvalue", r.max_eigenvalue);
  doc.set(prefix + ".samples_checked", r.samples_checked);
  doc.set(prefix + ".samples_skipped", r.samples_skipped);
}

inline void set_report(ReportDocument& doc, const std::string& prefix, const TemperatureReport& r) {
  doc.set(prefix + ".verdict", r.all_positive ? "all-positive" : "violated");
  doc.set(prefix + ".min_temperature", r.min_temperature);
  set_point(doc, prefix + ".min_point", r.min_point);
  doc.set(prefix + ".samples_checked", r.samples_checked);
  doc.set(prefix + ".violations", r.violations);
  if (r.witness) {
    set_point(doc, prefix + ".witness", *r.witness);
    if (r.witness_temperature) doc.set(prefix + ".witness_temperature", *r.witness_temperature);
    else doc.set(prefix + ".witness_temperature", "degenerate");
  }
}

inline bool certified(const ConvexityReport& r) {
  return r.verdict == Verdict::certified_concave || r.verdict == Verdict::certified_convex;
}

inline void write_document(const ReportDocument& doc, const std::string& path, std::ostream& out) {
  doc.emit(out);
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write '" + path + "'");
  doc.emit(f);
}

inline void add_model_flags(CLI::App* cmd, ModelFlags& m) {
  cmd->add_option("--model", m.kind, "polytropic | pathological | neg-temp | tabulated")
      ->check(CLI::IsMember({"polytropic", "pathological", "neg-temp", "tabulated"}));
  cmd->add_option("--gamma", m.gamma, "ratio of specific heats (polytropic 1.4, pathological 0.8)");
  cmd->add_option("--cv", m.cv, "specific heat at constant volume");
  cmd->add_option("--m0", m.m0, "reference mass");
  cmd->add_option("--v0", m.v0, "reference volume");
  cmd->add_option("--e0", m.e0, "reference energy");
  cmd->add_option("--table", m.table, "tabulated sigma(rho, e) file");
}

}  // namespace detail

// -----------------------------------------------------------------------------
// Subcommands
// -----------------------------------------------------------------------------

struct ThermoArgs {
  ModelFlags model;
  double rho = 1.0;
  double e = 1.0;
  double table_step_cells = 1.0;
  bool timestamp = true;
};

inline int cmd_thermo(const ThermoArgs& a, std::ostream& out) {
  if (!(a.rho > 0.0)) throw UsageError("density must be positive: --rho " + ReportDocument::format_number(a.rho));
  const EosModel model = build_model(a.model);
  ThermoOptions opts;
  opts.table_step_cells = a.table_step_cells;
  const ThermoPoint tp = thermo_point(model, a.rho, a.e, opts);
  ReportDocument doc;
  detail::header(doc, "thermo", model, a.timestamp);
  doc.set("thermo.rho", tp.rho);
  doc.set("thermo.e", tp.e);
  doc.set("thermo.s", tp.s);
  doc.set("thermo.T", tp.T);
  doc.set("thermo.p", tp.p);
  doc.set("thermo.dsigma_drho", tp.dsigma_drho);
  doc.set("thermo.dsigma_de", tp.dsigma_de);
  if (!(tp.T > 0.0)) doc.note("WARNING: NEGATIVE-TEMPERATURE T = " + ReportDocument::format_number(tp.T));
  doc.emit(out);
  return kOk;
}

struct CertifyArgs {
  ModelFlags model;
  std::string check = "all";
  std::string extensive = "0.5:2,0.5:2,0.5:2";
  std::string conserved = "0.5:2,-1:1,1:3";
  std::string thermo = "0.5:2,0.5:2";
  std::string lagrangian = "0.5:2,-1:1,1:3";
  double e_min = 0.1;
  std::size_t samples = 512;
  std::string sampling = "grid";
  std::optional<std::uint64_t> seed;
  double tol_rel = 1e-7;
  double step_rel = 1e-4;
  double table_step_cells = 2.0;
  std::string output;
  bool timestamp = true;
};

inline int cmd_certify(const CertifyArgs& a, std::ostream& out) {
  const std::uint64_t seed = a.seed ? *a.seed : default_seed();
  if (a.samples == 0) throw UsageError("--samples must be positive");
  const Sampling sampling = a.sampling == "random" ? Sampling::uniform_random : Sampling::grid;
  auto region3 = [&](const std::string& text, const char* what) {
    Region3 r;
    r.bounds = parse_box<3>(text, what);
    r.sample_count = a.samples;
    r.sampling = sampling;
    r.seed = seed;
    return r;
  };
  const Region3 ext = region3(a.extensive, "--extensive");
  Region3 cons = region3(a.conserved, "--conserved");
  cons.energy_window = Interval{a.e_min, std::numeric_limits<double>::infinity()};
  Region3 lag = region3(a.lagrangian, "--lagrangian");
  lag.energy_window = cons.energy_window;
  Region2 thermo;
  thermo.bounds = parse_box<2>(a.thermo, "--thermo-region");
  thermo.sample_count = a.samples;
  thermo.sampling = sampling;
  thermo.seed = seed;

  const EosModel model = build_model(a.model);
  CertifyOptions opts;
  opts.tol_rel = a.tol_rel;
  opts.step_rel = a.step_rel;
  opts.table_step_cells = a.table_step_cells;

  ReportDocument doc;
  detail::header(doc, "certify", model, a.timestamp);
  doc.set("certify.check", a.check);
  doc.set("certify.samples", a.samples);
  doc.set("certify.sampling", a.sampling);
  doc.set("certify.seed", std::to_string(seed));
  doc.set("certify.tol_rel", a.tol_rel);
  doc.set("certify.step_rel", a.step_rel);

  bool pass = true;
  if (a.check == "all") {
    const EquivalenceVerdict v = equivalence_check(model, ext, cons, thermo, opts);
    const ConvexityReport w = certify_wagner(model, lag, opts);
    detail::set_report(doc, "sigma", v.sigma);
    detail::set_report(doc, "temperature", v.temperature);
    detail::set_report(doc, "eta", v.eta);
    detail::set_report(doc, "wagner", w);
    const bool wagner_matches = w.verdict == v.eta.verdict;
    doc.set("wagner.matches_eta", wagner_matches);
    doc.set("prop3.sigma_concave", v.sigma_concave);
    doc.set("prop3.temperature_positive", v.temperature_positive);
    doc.set("prop3.eta_convex", v.eta_convex);
    doc.set("prop3.consistent", v.consistent);
    for (std::size_t i = 0; i < v.warnings.size(); ++i) doc.set("warning." + std::to_string(i), v.warnings[i]);
    doc.note(std::string("PROP3: ") + (v.consistent ? "consistent" : "INCONSISTENT"));
    pass = v.sigma_concave && v.temperature_positive && v.eta_convex && v.consistent && detail::certified(w) &&
           wagner_matches;
  } else if (a.check == "sigma") {
    const auto r = certify_sigma_concave(model, ext, opts);
    detail::set_report(doc, "sigma", r);
    pass = detail::certified(r);
  } else if (a.check == "eta") {
    const auto r = certify_eta_convex(model, cons, opts);
    detail::set_report(doc, "eta", r);
    pass = detail::certified(r);
  } else if (a.check == "wagner") {
    const auto r = certify_wagner(model, lag, opts);
    detail::set_report(doc, "wagner", r);
    pass = detail::certified(r);
  } else if (a.check == "temperature") {
    const auto r = certify_temperature_positive(model, thermo, opts.thermo);
    detail::set_report(doc, "temperature", r);
    pass = r.all_positive;
  } else {
    throw UsageError("unknown check '" + a.check + "'");
  }
  doc.set("certify.pass", pass);
  detail::write_document(doc, a.output, out);
  return pass ? kOk : kViolation;
}

struct SimulateArgs {
  ModelFlags model;
  std::string initial = "sod";
  std::string cells;
  std::string n = "200";
  double t_end = 0.2;
  double cfl = 0.45;
  std::string boundary;  // empty: transmissive for sod, periodic otherwise
  std::string domain = "0:1";
  double wave_speed_factor = 1.2;
  bool refine = false;
  std::string diagnostics = "diagnostics.csv";
  std::string profile = "profile.csv";
  bool timestamp = true;
};

inline std::vector<ConservedState> read_cells(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open cells file '" + path + "'");
  std::vector<ConservedState> cells;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (entropygate::detail::is_blank_or_comment(line)) continue;
    const auto v = entropygate::detail::parse_numbers(line, lineno);
    if (v.size() != 3) throw TableParseError(lineno, "expected 'rho q eps'");
    cells.push_back({v[0], v[1], v[2]});
  }
  return cells;
}

inline int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  if (!(a.cfl > 0.0 && a.cfl < 1.0)) throw UsageError("CFL number must lie in (0, 1), got " + ReportDocument::format_number(a.cfl));
  SimConfig c;
  c.model = build_model(a.model);
  c.cfl = a.cfl;
  c.t_end = a.t_end;
  c.wave_speed_factor = a.wave_speed_factor;
  c.domain = parse_interval(a.domain);
  std::vector<std::size_t> ns = parse_counts(a.n);
  if (a.initial == "sod") c.initial = SodInitial{};
  else if (a.initial == "smooth") c.initial = SmoothWaveInitial{};
  else if (a.initial == "custom") {
    if (a.cells.empty()) throw UsageError("--initial custom needs --cells PATH");
    auto cells = read_cells(a.cells);
    ns = {cells.size()};
    c.initial = std::move(cells);
  } else {
    throw UsageError("unknown initial condition '" + a.initial + "'");
  }
  if (a.boundary.empty()) c.boundary = a.initial == "sod" ? Boundary::transmissive : Boundary::periodic;
  else if (a.boundary == "periodic") c.boundary = Boundary::periodic;
  else if (a.boundary == "transmissive") c.boundary = Boundary::transmissive;
  else throw UsageError("unknown boundary '" + a.boundary + "'");
  if (ns.size() > 1 && !a.refine) throw UsageError("several cell counts given without --refine");
  c.n = ns.back();
  c.validate();

  ReportDocument doc;
  detail::header(doc, "simulate", c.model, a.timestamp);
  doc.set("simulate.initial", a.initial);
  doc.set("simulate.boundary", c.boundary == Boundary::periodic ? "periodic" : "transmissive");
  doc.set("simulate.cfl", c.cfl);
  doc.set("simulate.t_end", c.t_end);

  if (a.refine) {
    if (ns.size() < 2) throw UsageError("--refine needs at least two cell counts");
    const auto study = refinement_study(c, ns);
    for (const auto& p : study.points) doc.set("refine.drift." + std::to_string(p.n), p.drift);
    doc.set("refine.observed_order", study.observed_order);
    doc.note("observed entropy-drift order = " + ReportDocument::format_number(study.observed_order));
  }

  const RunResult res = run(c);
  {
    std::ofstream f(a.diagnostics);
    if (!f) throw UsageError("cannot write '" + a.diagnostics + "'");
    write_diagnostics(f, res.state);
  }
  {
    std::ofstream f(a.profile);
    if (!f) throw UsageError("cannot write '" + a.profile + "'");
    write_profile(f, c, res.state);
  }
  doc.set("simulate.n", c.n);
  doc.set("simulate.steps", res.steps);
  doc.set("simulate.min_dS", res.min_dS);
  doc.set("simulate.entropy_produced", res.entropy_produced);
  doc.set("simulate.entropy_drift", res.entropy_drift);
  doc.set("simulate.budget_residual_l1", res.state.budget_residual_l1);
  doc.set("simulate.diagnostics_file", a.diagnostics);
  doc.set("simulate.profile_file", a.profile);
  doc.note(res.min_dS >= -1e-12 ? "min dS per step ≥ 0" : "min dS per step < 0");
  doc.note("total entropy produced = " + ReportDocument::format_number(res.entropy_produced));
  doc.emit(out);
  return kOk;
}

struct TabulateArgs {
  ModelFlags model;
  std::string rho_range = "0.5:2";
  std::string e_range = "0.5:2";
  std::size_t n_rho = 64;
  std::size_t n_e = 64;
  std::string output;
};

inline int cmd_tabulate(const TabulateArgs& a, std::ostream& out) {
  const EosModel model = build_model(a.model);
  const Interval r = parse_interval(a.rho_range), e = parse_interval(a.e_range);
  if (!(r.lo < r.hi) || !(e.lo < e.hi)) throw UsageError("table ranges need min < max");
  if (a.n_rho < 2 || a.n_e < 2) throw UsageError("tables need at least two points per axis");
  const EntropyTable t = tabulate(model, linspace(r.lo, r.hi, a.n_rho), linspace(e.lo, e.hi, a.n_e));
  if (a.output.empty()) {
    out << "# sigma(rho, e) sampled from " << model.describe() << '\n';
    write_table(out, t);
    return kOk;
  }
  std::ofstream f(a.output);
  if (!f) throw UsageError("cannot write '" + a.output + "'");
  f << "# sigma(rho, e) sampled from " << model.describe() << '\n';
  write_table(f, t);
  return kOk;
}

// -----------------------------------------------------------------------------
// Entry point
// -----------------------------------------------------------------------------

/// Parses `args` (without the program name) and runs the selected subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Thermodynamic consistency and entropy convexity checker", "entropygate"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  ThermoArgs ta;
  auto* thermo = app.add_subcommand("thermo", "temperature, pressure and entropy gradient at (rho, e)");
  detail::add_model_flags(thermo, ta.model);
  thermo->add_option("--rho", ta.rho, "density")->required();
  thermo->add_option("--e", ta.e, "specific internal energy")->required();
  thermo->add_option("--table-cells", ta.table_step_cells, "table differencing step in cells");
  thermo->add_flag("!--no-timestamp", ta.timestamp, "omit the timestamp line");

  CertifyArgs ca;
  auto* certify = app.add_subcommand("certify", "sampled concavity / convexity certificates");
  detail::add_model_flags(certify, ca.model);
  certify->add_option("--check", ca.check, "sigma | eta | temperature | wagner | all")
      ->check(CLI::IsMember({"sigma", "eta", "temperature", "wagner", "all"}));
  certify->add_option("--extensive", ca.extensive, "M,V,E box as lo:hi,lo:hi,lo:hi");
  certify->add_option("--conserved", ca.conserved, "rho,q,eps box");
  certify->add_option("--thermo-region", ca.thermo, "rho,e box for the temperature check");
  certify->add_option("--lagrangian", ca.lagrangian, "tau,u,total-energy box for the Lagrangian check");
  certify->add_option("--e-min", ca.e_min, "minimum specific internal energy for conserved/Lagrangian samples");
  certify->add_option("--samples", ca.samples, "samples per region");
  certify->add_option("--sampling", ca.sampling, "grid | random")->check(CLI::IsMember({"grid", "random"}));
  certify->add_option("--seed", ca.seed, "random seed (default 42 or $ENTROPYGATE_SEED)");
  certify->add_option("--tol", ca.tol_rel, "relative eigenvalue tolerance");
  certify->add_option("--step", ca.step_rel, "relative finite-difference step");
  certify->add_option("--table-cells", ca.table_step_cells, "table Hessian step in cells");
  certify->add_option("--output", ca.output, "also write the report to this file");
  certify->add_flag("!--no-timestamp", ca.timestamp, "omit the timestamp line");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "1D finite-volume run with entropy budget");
  detail::add_model_flags(simulate, sa.model);
  simulate->add_option("--initial", sa.initial, "sod | smooth | custom")
      ->check(CLI::IsMember({"sod", "smooth", "custom"}));
  simulate->add_option("--cells", sa.cells, "custom initial cells, one 'rho q eps' row per cell");
  simulate->add_option("--n", sa.n, "cell count, or a comma list with --refine");
  simulate->add_option("--t-end", sa.t_end, "final time");
  simulate->add_option("--cfl", sa.cfl, "Courant number in (0, 1)");
  simulate->add_option("--boundary", sa.boundary, "periodic | transmissive");
  simulate->add_option("--domain", sa.domain, "a:b");
  simulate->add_option("--wave-factor", sa.wave_speed_factor, "wave-speed safety multiplier");
  simulate->add_flag("--refine", sa.refine, "grid-refinement study of the entropy drift");
  simulate->add_option("--diagnostics", sa.diagnostics, "per-step diagnostics output file");
  simulate->add_option("--profile", sa.profile, "final profile output file");
  simulate->add_flag("!--no-timestamp", sa.timestamp, "omit the timestamp line");

  TabulateArgs tb;
  auto* tabulate_cmd = app.add_subcommand("tabulate", "write a sigma(rho, e) table sampled from a model");
  detail::add_model_flags(tabulate_cmd, tb.model);
  tabulate_cmd->add_option("--rho-range", tb.rho_range, "lo:hi");
  tabulate_cmd->add_option("--e-range", tb.e_range, "lo:hi");
  tabulate_cmd->add_option("--n-rho", tb.n_rho, "density points");
  tabulate_cmd->add_option("--n-e", tb.n_e, "energy points");
  tabulate_cmd->add_option("--output", tb.output, "output file (stdout if omitted)");

  std::vector<std::string> argv_store{"entropygate"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (thermo->parsed()) return cmd_thermo(ta, out);
    if (certify->parsed()) return cmd_certify(ca, out);
    if (simulate->parsed()) return cmd_simulate(sa, out);
    if (tabulate_cmd->parsed()) return cmd_tabulate(tb, out);
  } catch (const StepRejected& e) {
    err << "simulation aborted: " << e.what() << '\n';
    return kSimulationAbort;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace entropygate::cli
