// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "entropygate/entropygate.hpp"
#include "oracles.hpp"

using namespace entropygate;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

EosModel poly(double m0 = 1, double v0 = 1, double e0 = 1) { return EosModel::polytropic({1.4, 1.0, m0, v0, e0}); }
EosModel patho(double m0 = 1, double v0 = 1, double e0 = 1) {
  return EosModel::pathological_gamma({0.8, 1.0, m0, v0, e0});
}
std::vector<EosModel> closed_forms() { return {poly(), patho(), EosModel::negative_temperature()}; }

Region3 box3(Interval a, Interval b, Interval c) {
  Region3 r;
  r.bounds = {a, b, c};
  r.sample_count = 512;
  return r;
}
Region3 ext_region() { return box3({0.5, 2}, {0.5, 2}, {0.5, 2}); }
Region3 cons_region() {
  auto r = box3({0.5, 2}, {-1, 1}, {1, 3});
  r.energy_window = Interval{0.1, 1e300};
  return r;
}
Region3 lag_region() {
  auto r = box3({0.5, 2}, {-1, 1}, {1, 3});
  r.energy_window = Interval{0.1, 1e300};
  return r;
}
Region2 thermo_region() {
  Region2 r;
  r.bounds = {Interval{0.5, 2}, Interval{0.5, 2}};
  r.sample_count = 512;
  return r;
}

CertifyOptions opts() {
  CertifyOptions o;
  o.tol_rel = 1e-7;
  o.step_rel = 1e-4;
  return o;
}

Outcome ac1() {
  struct Expect {
    const char* name;
    EosModel model;
    bool s, t, e;
  };
  const std::vector<Expect> cases{{"polytropic", poly(), true, true, true},
                                  {"pathological", patho(), false, true, false},
                                  {"negative-temperature", EosModel::negative_temperature(), true, false, false}};
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const auto v = equivalence_check(c.model, ext_region(), cons_region(), thermo_region(), opts());
    const bool match = v.sigma_concave == c.s && v.temperature_positive == c.t && v.eta_convex == c.e && v.consistent;
    ok = ok && match;
    detail += fmt("%s=(%c,%c,%c)%s ", c.name, v.sigma_concave ? 'T' : 'F', v.temperature_positive ? 'T' : 'F',
                  v.eta_convex ? 'T' : 'F', v.consistent ? "" : "!inconsistent");
  }
  return {ok, detail};
}

Outcome ac2() {
  oracle::Sampler rs(2002);
  const double g = 1.4, cv = 1.0;
  const auto m = poly();
  double worst_p = 0.0, worst_T = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double rho = rs.uniform(0.1, 10), e = rs.uniform(0.1, 10);
    const auto tp = thermo_point(m, rho, e);
    const double p_ref = (g - 1.0) * rho * e, T_ref = e / cv;
    worst_p = std::max(worst_p, std::abs(tp.p - p_ref) / p_ref);
    worst_T = std::max(worst_T, std::abs(tp.T - T_ref) / T_ref);
  }
  return {worst_p <= 1e-10 && worst_T <= 1e-10, fmt("max rel err p=%.2e T=%.2e (1000 states)", worst_p, worst_T)};
}

Outcome ac3() {
  oracle::Sampler rs(2003);
  double worst24 = 0.0, worst25 = 0.0, worst19 = 0.0;
  const std::vector<double> ts{0.0, 0.25, 0.5, 1.0};
  for (int k = 0; k < 1000; ++k) {
    const double rho = rs.uniform(0.2, 5), E = rs.uniform(0.2, 5), dE = rs.uniform(0.01, 2);
    const auto [u1, u2] = delta_e_states(rho, E, dE);
    for (double t : ts) {
      const double ref = E + 4 * t * (1 - t) * dE;
      worst24 = std::max(worst24, std::abs(mixing_energy(u1, u2, t) - ref) / ref);
    }
    for (const auto& m : closed_forms()) {
      const double c0 = lax_entropy(m, u1);
      for (double t : {0.1, 0.3, 0.5, 0.7, 1.0}) {
        const double c = (1 - t) * lax_entropy(m, u1) + t * lax_entropy(m, u2);
        worst25 = std::max(worst25, std::abs(c - c0) / (1 + std::abs(c0)));
      }
    }
  }
  double min19 = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 10000; ++k) {
    const ConservedState a{rs.uniform(0.05, 10), rs.uniform(-5, 5), rs.uniform(0, 10)};
    const ConservedState b{rs.uniform(0.05, 10), rs.uniform(-5, 5), rs.uniform(0, 10)};
    min19 = std::min(min19, mixing_lower_bound_gap(a, b, rs.uniform(0, 1)));
  }
  worst19 = min19;
  const bool ok = worst24 <= 1e-12 && worst25 <= 1e-10 && worst19 >= -1e-12;
  return {ok, fmt("mixing-energy err=%.2e, eta combination drift=%.2e, min q^2/rho gap=%.2e", worst24, worst25, worst19)};
}

Outcome ac4() {
  double worst = 0.0;
  std::size_t n = 0;
  for (const auto& m : closed_forms()) {
    auto f = [&](const Vec3<long double>& y) { return m.entropy(y[0], y[1], y[2]); };
    for (const auto& p : sample_points(ext_region())) {
      const Vec3<double> x{p[0], p[1], p[2]};
      const auto h = detail::hessian_steps(m, Coordinates::extensive, x, opts());
      const auto Hl = hessian3<long double>(f, cast3<long double>(x), h);
      Mat3<double> H{};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) H[i][j] = static_cast<double>(Hl[i][j]);
      const double ratio = norm2(mat_vec(H, x)) / (frobenius_norm(H) * norm2(x));
      worst = std::max(worst, ratio);
      ++n;
    }
  }
  return {worst <= 1e-4, fmt("max |Hx|/(|H||x|)=%.2e over %zu states", worst, n)};
}

Outcome ac5() {
  oracle::Sampler rs(2005);
  std::string detail;
  bool ok = true;
  const char* names[] = {"polytropic", "pathological", "negative-temperature"};
  int idx = 0;
  for (const auto& m : closed_forms()) {
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double rho = rs.uniform(0.5, 2), q = rs.uniform(-1, 1);
      const ConservedState u{rho, q, q * q / (2 * rho) + rho * rs.uniform(0.5, 2)};
      worst = std::max(worst, compatibility_residual(m, u, 1e-5));
    }
    ok = ok && worst <= 1e-5;
    detail += fmt("%s=%.2e ", names[idx++], worst);
  }
  return {ok, detail};
}

Outcome ac6() {
  bool ok = true;
  std::string detail;
  for (const auto& m : closed_forms()) {
    const auto e = certify_eta_convex(m, cons_region(), opts());
    const auto w = certify_wagner(m, lag_region(), opts());
    ok = ok && e.verdict == w.verdict;
    detail += fmt("%s:%s/%s ", to_string(m.kind()), to_string(e.verdict), to_string(w.verdict));
  }
  return {ok, detail};
}

Outcome ac7() {
  SimConfig sod;
  sod.n = 200;
  sod.cfl = 0.45;
  sod.t_end = 0.2;
  const auto r = run(sod);
  const bool sod_ok = r.min_dS >= -1e-12 && r.entropy_produced > 0.0;

  SimConfig smooth;
  smooth.initial = SmoothWaveInitial{};
  smooth.boundary = Boundary::periodic;
  const auto study = refinement_study(smooth, {100, 200, 400});
  const bool order_ok = study.observed_order >= 0.8;

  double worst_cons = 0.0;
  for (std::size_t n : {100u, 200u, 400u}) {
    smooth.n = n;
    const auto res = run(smooth);
    const auto& a = res.state.diagnostics.front();
    const auto& b = res.state.diagnostics.back();
    worst_cons = std::max({worst_cons, std::abs(b.mass - a.mass) / std::abs(a.mass),
                           std::abs(b.momentum - a.momentum) / std::abs(a.momentum),
                           std::abs(b.energy - a.energy) / std::abs(a.energy)});
  }
  const bool cons_ok = worst_cons <= 1e-12;
  return {sod_ok && order_ok && cons_ok,
          fmt("sod min dS=%.2e produced=%.4e; drift order=%.3f; periodic conservation err=%.2e", r.min_dS,
              r.entropy_produced, study.observed_order, worst_cons)};
}

Outcome ac8() {
  const auto src = poly();
  const auto table = tabulate(src, linspace(0.5, 2.0, 64), linspace(0.5, 2.0, 64));
  const auto t = EosModel::tabulated(table);
  double worst_p = 0.0, worst_T = 0.0;
  std::size_t n = 0;
  auto probe = [&](double rho, double e) {
    const auto a = thermo_point(src, rho, e), b = thermo_point(t, rho, e);
    worst_p = std::max(worst_p, std::abs(a.p - b.p) / a.p);
    worst_T = std::max(worst_T, std::abs(a.T - b.T) / a.T);
    ++n;
  };
  const auto& ra = table.rho_axis();
  const auto& ea = table.e_axis();
  // Interior nodes, then off-node points inside the 10% inset.
  for (std::size_t i = 1; i + 1 < ra.size(); ++i)
    for (std::size_t j = 1; j + 1 < ea.size(); ++j) probe(ra[i], ea[j]);
  oracle::Sampler rs(2008);
  for (int k = 0; k < 2000; ++k) probe(rs.uniform(0.65, 1.85), rs.uniform(0.65, 1.85));

  auto inset = box3({0.65, 1.85}, {-0.3, 0.3}, {0.65, 3.0});
  inset.energy_window = Interval{0.65, 1.85};
  const auto rep = certify_eta_convex(t, inset, opts());
  const bool ok = worst_p <= 1e-3 && worst_T <= 1e-3 && rep.verdict == Verdict::certified_convex;
  return {ok, fmt("max rel err p=%.2e T=%.2e (%zu points); inset eta %s (%zu samples)", worst_p, worst_T, n,
                  to_string(rep.verdict), rep.samples_checked)};
}

Outcome ac9() {
  struct Baseline {
    ConvexityReport sigma, eta, wagner;
    bool temperature;
  };
  auto measure = [](const EosModel& m) {
    return Baseline{certify_sigma_concave(m, ext_region(), opts()), certify_eta_convex(m, cons_region(), opts()),
                    certify_wagner(m, lag_region(), opts()),
                    certify_temperature_positive(m, thermo_region()).all_positive};
  };
  bool verdicts_ok = true;
  double worst = 0.0;
  std::size_t combos = 0;
  for (auto make : {std::function<EosModel(double, double, double)>(poly),
                    std::function<EosModel(double, double, double)>(patho)}) {
    const Baseline base = measure(make(1, 1, 1));
    for (double m0 : {0.5, 1.0, 2.0})
      for (double v0 : {0.5, 1.0, 2.0})
        for (double e0 : {0.5, 1.0, 2.0}) {
          const Baseline b = measure(make(m0, v0, e0));
          ++combos;
          verdicts_ok = verdicts_ok && b.sigma.verdict == base.sigma.verdict && b.eta.verdict == base.eta.verdict &&
               b.wagner.verdict == base.wagner.verdict && b.temperature == base.temperature;
          worst = std::max({worst, std::abs(b.sigma.worst_eigenvalue - base.sigma.worst_eigenvalue),
                            std::abs(b.eta.worst_eigenvalue - base.eta.worst_eigenvalue),
                            std::abs(b.wagner.worst_eigenvalue - base.wagner.worst_eigenvalue)});
        }
  }
  return {verdicts_ok && worst <= 1e-9, fmt("%zu reference sets, verdicts %s, max worst-eigenvalue shift=%.2e", combos,
                                            verdicts_ok ? "unchanged" : "CHANGED", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"AC1 equivalence matrix", ac1},        {"AC2 polytropic oracles", ac2},
      {"AC3 proof identities", ac3},          {"AC4 Euler relation", ac4},
      {"AC5 entropy-pair compatibility", ac5}, {"AC6 Lagrangian cross-check", ac6},
      {"AC7 simulation entropy budget", ac7}, {"AC8 tabulated round-trip", ac8},
      {"AC9 reference invariance", ac9}};
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
    if (!o.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
