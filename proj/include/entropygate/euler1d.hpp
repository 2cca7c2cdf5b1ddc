#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "entropygate/core.hpp"
#include "entropygate/eos.hpp"
#include "entropygate/lax.hpp"
#include "entropygate/thermo.hpp"

namespace entropygate {

enum class Boundary { periodic, transmissive };

/// Sod shock tube: (rho, u, p) = (1, 0, 1) left of the midpoint, (0.125, 0, 0.1) right.
struct SodInitial {};
/// rho = 1 + 0.2 sin(2 pi x'), u = 0.1, p = 1 with x' the position scaled to [0, 1).
struct SmoothWaveInitial {};
using InitialCondition = std::variant<SodInitial, SmoothWaveInitial, std::vector<ConservedState>>;

struct SimConfig {
  EosModel model = EosModel::polytropic();
  std::size_t n = 200;
  Interval domain{0.0, 1.0};
  double cfl = 0.45;
  double t_end = 0.2;
  Boundary boundary = Boundary::transmissive;
  InitialCondition initial = SodInitial{};
  /// Multiplies the wave-speed estimate in both the flux and the time step.
  double wave_speed_factor = 1.2;
  double sound_speed_floor = 1e-12;
  std::size_t max_steps = 10'000'000;
  ThermoOptions thermo{};

  void validate() const {
    if (n < 4) throw std::invalid_argument("cell count must be at least 4");
    if (!(cfl > 0.0 && cfl < 1.0)) throw std::invalid_argument("CFL number must lie in (0, 1), got " + std::to_string(cfl));
    if (!(t_end > 0.0)) throw std::invalid_argument("final time must be positive");
    if (!(domain.lo < domain.hi)) throw std::invalid_argument("domain must satisfy a < b");
    if (!(wave_speed_factor >= 1.0)) throw std::invalid_argument("wave speed factor must be at least 1");
    if (auto cells = std::get_if<std::vector<ConservedState>>(&initial); cells && cells->size() != n)
      throw std::invalid_argument("custom initial data has " + std::to_string(cells->size()) +
                                  " cells, expected " + std::to_string(n));
  }
};

/// One row of per-step diagnostics.
struct StepRecord {
  double t = 0.0;
  double entropy_total = 0.0;
  double dS = 0.0;
  double mass = 0.0;
  double momentum = 0.0;
  double energy = 0.0;
};

struct SimState {
  std::vector<ConservedState> cells;
  double t = 0.0;
  double dx = 0.0;
  /// sum_i rho_i s_i dx
  double entropy_total = 0.0;
  std::vector<double> entropy_history;
  std::vector<StepRecord> diagnostics;
  /// Time integral of (rho u s)(b) - (rho u s)(a); zero for periodic runs.
  double boundary_entropy_outflow = 0.0;
  /// sum over steps of |dS + dt [rho u s]_a^b|
  double budget_residual_l1 = 0.0;
};

struct StepRejected : Error {
  StepRejected(double time, std::size_t cell_index, const std::string& why)
      : Error("step rejected at t = " + std::to_string(time) + ", cell " + std::to_string(cell_index) + ": " + why),
        t(time),
        cell(cell_index) {}
  double t;
  std::size_t cell;
};

// -----------------------------------------------------------------------------
// Initial data
// -----------------------------------------------------------------------------

inline ConservedState primitive_to_conserved(double rho, double u, double p, double gamma) {
  const double e = p / ((gamma - 1.0) * rho);
  return {rho, rho * u, rho * e + 0.5 * rho * u * u};
}

namespace detail {
inline double require_polytropic_gamma(const EosModel& model) {
  if (model.kind() != EosKind::polytropic)
    throw std::invalid_argument("closed-form initial data needs a polytropic model; supply custom cells for " +
                                model.describe());
  return model.polytropic_params()->gamma;
}

inline double cell_center(const SimConfig& c, std::size_t i) {
  const double dx = c.domain.width() / static_cast<double>(c.n);
  return c.domain.lo + (static_cast<double>(i) + 0.5) * dx;
}
}  // namespace detail

/// Smooth periodic wave evaluated at a position in [0, 1).
inline ConservedState smooth_wave_state(double x_unit, double gamma) {
  const double rho = 1.0 + 0.2 * std::sin(2.0 * std::numbers::pi * x_unit);
  return primitive_to_conserved(rho, 0.1, 1.0, gamma);
}

inline std::vector<ConservedState> initial_sod(const SimConfig& c) {
  const double gamma = detail::require_polytropic_gamma(c.model);
  const double split = 0.5 * (c.domain.lo + c.domain.hi);
  std::vector<ConservedState> cells(c.n);
  for (std::size_t i = 0; i < c.n; ++i)
    cells[i] = detail::cell_center(c, i) < split ? primitive_to_conserved(1.0, 0.0, 1.0, gamma)
                                                 : primitive_to_conserved(0.125, 0.0, 0.1, gamma);
  return cells;
}

inline std::vector<ConservedState> initial_smooth(const SimConfig& c) {
  const double gamma = detail::require_polytropic_gamma(c.model);
  std::vector<ConservedState> cells(c.n);
  for (std::size_t i = 0; i < c.n; ++i)
    cells[i] = smooth_wave_state((detail::cell_center(c, i) - c.domain.lo) / c.domain.width(), gamma);
  return cells;
}

// -----------------------------------------------------------------------------
// Scheme
// -----------------------------------------------------------------------------

/// |u| + c with c^2 estimated as (1 + p/(rho e)) p/rho, which equals gamma p/rho
/// for a polytropic gas.
inline double wave_speed(const EosModel& model, const ConservedState& u, double floor = 1e-12,
                         const ThermoOptions& opts = {}) {
  const double e = internal_energy(u);
  const double p = pressure(model, u.rho, e, opts);
  const double rho_e = u.rho * e;
  const double gp = (rho_e != 0.0 ? 1.0 + p / rho_e : 1.0) * p / u.rho;
  return std::abs(u.q / u.rho) + std::sqrt(std::max(gp, floor));
}

/// Rusanov flux F = (f(UL) + f(UR))/2 - a (UR - UL)/2 with a the larger
/// wave-speed estimate of the two states times `factor`.
inline Vec3<double> numerical_flux(const EosModel& model, const ConservedState& ul, const ConservedState& ur,
                                   double factor = 1.2, double floor = 1e-12, const ThermoOptions& opts = {}) {
  if (!(ul.rho > 0.0) || !(ur.rho > 0.0)) throw DomainError("numerical flux needs positive densities");
  const auto fl = euler_flux(model, ul, opts);
  const auto fr = euler_flux(model, ur, opts);
  const double a = factor * std::max(wave_speed(model, ul, floor, opts), wave_speed(model, ur, floor, opts));
  const Vec3<double> l = ul.as_vec(), r = ur.as_vec();
  Vec3<double> f{};
  for (std::size_t k = 0; k < 3; ++k) f[k] = 0.5 * (fl[k] + fr[k]) - 0.5 * a * (r[k] - l[k]);
  return f;
}

inline double total_entropy(const EosModel& model, const std::vector<ConservedState>& cells, double dx) {
  double s = 0.0;
  for (const auto& c : cells) s += c.rho * sigma_specific(model, c.rho, internal_energy(c));
  return s * dx;
}

inline Vec3<double> conserved_totals(const std::vector<ConservedState>& cells, double dx) {
  Vec3<double> tot{};
  for (const auto& c : cells) {
    tot[0] += c.rho;
    tot[1] += c.q;
    tot[2] += c.eps;
  }
  for (double& x : tot) x *= dx;
  return tot;
}

namespace detail {
inline double entropy_flux_density(const EosModel& model, const ConservedState& c) {
  return c.q * sigma_specific(model, c.rho, internal_energy(c));
}

inline StepRecord record(const SimState& s, double dS) {
  const auto tot = conserved_totals(s.cells, s.dx);
  return {s.t, s.entropy_total, dS, tot[0], tot[1], tot[2]};
}
}  // namespace detail

/// Builds the t = 0 state from the configured initial condition.
inline SimState initial_state(const SimConfig& c) {
  c.validate();
  SimState s;
  s.dx = c.domain.width() / static_cast<double>(c.n);
  s.cells = std::visit(
      [&](const auto& init) -> std::vector<ConservedState> {
        using T = std::decay_t<decltype(init)>;
        if constexpr (std::is_same_v<T, SodInitial>) return initial_sod(c);
        else if constexpr (std::is_same_v<T, SmoothWaveInitial>) return initial_smooth(c);
        else return init;
      },
      c.initial);
  for (std::size_t i = 0; i < s.cells.size(); ++i) {
    const auto& u = s.cells[i];
    if (!(u.rho > 0.0) || !c.model.admits(u.rho, internal_energy(u)))
      throw StepRejected(0.0, i, "initial cell is not admissible for " + c.model.describe());
  }
  s.entropy_total = total_entropy(c.model, s.cells, s.dx);
  s.entropy_history.push_back(s.entropy_total);
  s.diagnostics.push_back(detail::record(s, 0.0));
  return s;
}

/// One forward-Euler finite-volume step with dt = cfl dx / max wave speed,
/// clipped so that t does not pass t_end.
inline SimState step(const SimState& state, const SimConfig& c) {
  const std::size_t n = state.cells.size();
  const auto& model = c.model;
  auto ghost_left = [&] { return c.boundary == Boundary::periodic ? state.cells[n - 1] : state.cells[0]; };
  auto ghost_right = [&] { return c.boundary == Boundary::periodic ? state.cells[0] : state.cells[n - 1]; };

  double amax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    try {
      amax = std::max(amax, c.wave_speed_factor * wave_speed(model, state.cells[i], c.sound_speed_floor, c.thermo));
    } catch (const Error& err) {
      throw StepRejected(state.t, i, err.what());
    }
  }
  double dt = c.cfl * state.dx / amax;
  bool last = false;
  if (state.t + dt >= c.t_end) {
    dt = c.t_end - state.t;
    last = true;
  }

  // Interface k sits between cell k-1 and cell k; k = 0 and k = n touch the ghosts.
  std::vector<Vec3<double>> flux(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const ConservedState& l = k == 0 ? ghost_left() : state.cells[k - 1];
    const ConservedState& r = k == n ? ghost_right() : state.cells[k];
    try {
      flux[k] = numerical_flux(model, l, r, c.wave_speed_factor, c.sound_speed_floor, c.thermo);
    } catch (const Error& err) {
      throw StepRejected(state.t, k == 0 ? 0 : k - 1, err.what());
    }
  }

  SimState next = state;
  const double lambda = dt / state.dx;
  for (std::size_t i = 0; i < n; ++i) {
    auto& u = next.cells[i];
    u.rho -= lambda * (flux[i + 1][0] - flux[i][0]);
    u.q -= lambda * (flux[i + 1][1] - flux[i][1]);
    u.eps -= lambda * (flux[i + 1][2] - flux[i][2]);
    if (!(u.rho > 0.0)) throw StepRejected(state.t, i, "non-positive density " + std::to_string(u.rho));
    const double e = internal_energy(u);
    if (!model.admits(u.rho, e))
      throw StepRejected(state.t, i, "internal energy " + std::to_string(e) + " not admissible");
  }
  next.t = last ? c.t_end : state.t + dt;
  next.entropy_total = total_entropy(model, next.cells, next.dx);
  const double dS = next.entropy_total - state.entropy_total;

  double outflow = 0.0;
  if (c.boundary == Boundary::transmissive)
    outflow = dt * (detail::entropy_flux_density(model, state.cells[n - 1]) -
                    detail::entropy_flux_density(model, state.cells[0]));
  next.boundary_entropy_outflow += outflow;
  next.budget_residual_l1 += std::abs(dS + outflow);
  next.entropy_history.push_back(next.entropy_total);
  next.diagnostics.push_back(detail::record(next, dS));
  return next;
}

struct RunResult {
  SimState state;
  std::size_t steps = 0;
  /// Smallest per-step change of total entropy.
  double min_dS = 0.0;
  /// S(t_end) - S(0) + boundary outflow: entropy created inside the domain.
  double entropy_produced = 0.0;
  /// |S(t_end) - S(0)|
  double entropy_drift = 0.0;
};

inline RunResult run(const SimConfig& c) {
  RunResult res;
  res.state = initial_state(c);
  const double s0 = res.state.entropy_total;
  res.min_dS = std::numeric_limits<double>::infinity();
  while (res.state.t < c.t_end) {
    if (res.steps >= c.max_steps) throw StepRejected(res.state.t, 0, "step limit reached");
    res.state = step(res.state, c);
    ++res.steps;
    res.min_dS = std::min(res.min_dS, res.state.diagnostics.back().dS);
  }
  res.entropy_drift = std::abs(res.state.entropy_total - s0);
  res.entropy_produced = res.state.entropy_total - s0 + res.state.boundary_entropy_outflow;
  return res;
}

struct RefinementPoint {
  std::size_t n = 0;
  double drift = 0.0;
};

struct RefinementStudy {
  std::vector<RefinementPoint> points;
  /// log(drift_first / drift_last) / log(n_last / n_first)
  double observed_order = 0.0;
};

inline RefinementStudy refinement_study(SimConfig c, const std::vector<std::size_t>& ns) {
  if (ns.size() < 2) throw std::invalid_argument("refinement needs at least two resolutions");
  RefinementStudy study;
  for (std::size_t n : ns) {
    c.n = n;
    study.points.push_back({n, run(c).entropy_drift});
  }
  const auto& a = study.points.front();
  const auto& b = study.points.back();
  study.observed_order = std::log(a.drift / b.drift) / std::log(static_cast<double>(b.n) / static_cast<double>(a.n));
  return study;
}

// -----------------------------------------------------------------------------
// Output
// -----------------------------------------------------------------------------

inline void write_diagnostics(std::ostream& out, const SimState& s) {
  const auto old = out.precision(17);
  out << "# t,entropy_total,dS,mass,momentum,energy\n";
  for (const auto& r : s.diagnostics)
    out << r.t << ',' << r.entropy_total << ',' << r.dS << ',' << r.mass << ',' << r.momentum << ',' << r.energy
        << '\n';
  out.precision(old);
}

inline void write_profile(std::ostream& out, const SimConfig& c, const SimState& s) {
  const auto old = out.precision(17);
  out << "# x,rho,u,p,s\n";
  for (std::size_t i = 0; i < s.cells.size(); ++i) {
    const auto& u = s.cells[i];
    const double e = internal_energy(u);
    out << c.domain.lo + (static_cast<double>(i) + 0.5) * s.dx << ',' << u.rho << ',' << u.q / u.rho << ','
        << pressure(c.model, u.rho, e, c.thermo) << ',' << sigma_specific(c.model, u.rho, e) << '\n';
  }
  out.precision(old);
}

}  // namespace entropygate
