#pragma once

#include <cmath>
#include <string>

#include "entropygate/core.hpp"
#include "entropygate/eos.hpp"

namespace entropygate {

/// Knobs for numerical differentiation of tabulated models and for
/// inverting d sigma/d e.
struct ThermoOptions {
  /// Central-difference step for tabulated models, in units of the local
  /// cell width along each axis.
  double table_step_cells = 1.0;
  /// |d sigma/d e| must exceed floor * (1 + |sigma| / (1 + |e|)).
  double degeneracy_floor = 1e-12;
};

struct EntropyGradient {
  double dsigma_drho = 0.0;
  double dsigma_de = 0.0;
};

struct ThermoPoint {
  double rho = 0.0;
  double e = 0.0;
  double s = 0.0;
  double T = 0.0;
  double p = 0.0;
  double dsigma_drho = 0.0;
  double dsigma_de = 0.0;
};

inline EntropyGradient entropy_gradient(const EosModel& model, double rho, double e,
                                        const ThermoOptions& opts = {}) {
  if (!(rho > 0.0)) throw DomainError("density must be positive (rho = " + std::to_string(rho) + ")");
  if (model.is_closed_form()) {
    auto [dr, de] = model.analytic_specific_gradient(rho, e);
    return {dr, de};
  }
  const EntropyTable& t = *model.table();
  const double hr = opts.table_step_cells * t.rho_spacing(rho);
  const double he = opts.table_step_cells * t.e_spacing(e);
  if (!t.covers(rho - hr, e - he) || !t.covers(rho + hr, e + he))
    throw DomainError("(rho, e) = (" + std::to_string(rho) + ", " + std::to_string(e) +
                      ") is within one differencing step of the table boundary");
  return {(model.specific_entropy(rho + hr, e) - model.specific_entropy(rho - hr, e)) / (2.0 * hr),
          (model.specific_entropy(rho, e + he) - model.specific_entropy(rho, e - he)) / (2.0 * he)};
}

namespace detail {

inline void require_nondegenerate(const EosModel& model, double rho, double e, double dsde,
                                  const ThermoOptions& opts) {
  const double s = sigma_specific(model, rho, e);
  const double floor = opts.degeneracy_floor * (1.0 + std::abs(s) / (1.0 + std::abs(e)));
  if (!(std::abs(dsde) >= floor))
    throw DegenerateError("d sigma/d e = " + std::to_string(dsde) + " is below the degeneracy floor at (rho, e) = (" +
                          std::to_string(rho) + ", " + std::to_string(e) + ")");
}

}  // namespace detail

/// T = 1 / (d sigma/d e). The sign is reported as computed.
inline double temperature(const EosModel& model, double rho, double e, const ThermoOptions& opts = {}) {
  const auto g = entropy_gradient(model, rho, e, opts);
  detail::require_nondegenerate(model, rho, e, g.dsigma_de, opts);
  return 1.0 / g.dsigma_de;
}

/// p = -rho^2 (d sigma/d rho) / (d sigma/d e).
inline double pressure(const EosModel& model, double rho, double e, const ThermoOptions& opts = {}) {
  const auto g = entropy_gradient(model, rho, e, opts);
  detail::require_nondegenerate(model, rho, e, g.dsigma_de, opts);
  return -rho * rho * g.dsigma_drho / g.dsigma_de;
}

/// (dS/dM, dS/dV, dS/dE) at an extensive state. Tabulated models use
/// central differences sized so that rho and e move by the configured
/// number of cells.
inline Vec3<double> extensive_gradient(const EosModel& model, const ExtensiveState& s,
                                       const ThermoOptions& opts = {}) {
  if (model.is_closed_form()) return model.analytic_extensive_gradient(s);
  const EntropyTable& t = *model.table();
  const double rho = s.M / s.V, e = s.E / s.M;
  const double dr = opts.table_step_cells * t.rho_spacing(rho);
  const double de = opts.table_step_cells * t.e_spacing(e);
  // rho = M/V and e = E/M: an M-step moves rho by hM / V, a V-step by
  // rho hV / V, and an E-step moves e by hE / M.
  const Vec3<double> h{dr * s.V, dr * s.V / rho, de * s.M};
  Vec3<double> g{};
  const Vec3<double> x = s.as_vec();
  for (std::size_t i = 0; i < 3; ++i) {
    Vec3<double> xp = x, xm = x;
    xp[i] += h[i];
    xm[i] -= h[i];
    const ExtensiveState sp{xp[0], xp[1], xp[2]}, sm{xm[0], xm[1], xm[2]};
    if (!model.admits(sp) || !model.admits(sm))
      throw DomainError("extensive state is within one differencing step of the table boundary");
    g[i] = (sigma_extensive(model, sp) - sigma_extensive(model, sm)) / (2.0 * h[i]);
  }
  return g;
}

/// p = T dS/dV evaluated at (1, 1/rho, e) with T = 1 / (dS/dE): the
/// extensive route, independent of the specific-variable formula above.
inline double pressure_from_extensive(const EosModel& model, double rho, double e,
                                      const ThermoOptions& opts = {}) {
  const auto g = extensive_gradient(model, {1.0, 1.0 / rho, e}, opts);
  if (!(std::abs(g[2]) >= opts.degeneracy_floor))
    throw DegenerateError("dS/dE vanishes at (rho, e) = (" + std::to_string(rho) + ", " + std::to_string(e) + ")");
  const double T = 1.0 / g[2];
  return T * g[1];
}

inline ThermoPoint thermo_point(const EosModel& model, double rho, double e, const ThermoOptions& opts = {}) {
  const auto g = entropy_gradient(model, rho, e, opts);
  detail::require_nondegenerate(model, rho, e, g.dsigma_de, opts);
  ThermoPoint tp;
  tp.rho = rho;
  tp.e = e;
  tp.s = sigma_specific(model, rho, e);
  tp.dsigma_drho = g.dsigma_drho;
  tp.dsigma_de = g.dsigma_de;
  tp.T = 1.0 / g.dsigma_de;
  tp.p = -rho * rho * g.dsigma_drho / g.dsigma_de;
  return tp;
}

}  // namespace entropygate
