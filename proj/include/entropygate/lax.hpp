#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <string>

#include "entropygate/core.hpp"
#include "entropygate/eos.hpp"
#include "entropygate/thermo.hpp"

namespace entropygate {

/// U = (rho, q = rho u, eps = rho e + rho u^2 / 2).
struct ConservedState {
  double rho = 1.0;
  double q = 0.0;
  double eps = 1.0;

  [[nodiscard]] Vec3<double> as_vec() const { return {rho, q, eps}; }
  static ConservedState from_vec(const Vec3<double>& v) { return {v[0], v[1], v[2]}; }

  friend bool operator==(const ConservedState&, const ConservedState&) = default;
};

/// Entropy value, entropy flux and entropy variables at one state.
struct LaxPair {
  double eta = 0.0;
  double xi = 0.0;
  Vec3<double> phi{};
};

/// e = eps/rho - q^2 / (2 rho^2), i.e. rho e = eps - q^2 / (2 rho).
template <std::floating_point Real>
Real internal_energy(const Vec3<Real>& u) {
  if (!(u[0] > 0)) throw DomainError("density must be positive (rho = " + std::to_string(static_cast<double>(u[0])) + ")");
  return u[2] / u[0] - u[1] * u[1] / (2 * u[0] * u[0]);
}

inline double internal_energy(const ConservedState& u) { return internal_energy(u.as_vec()); }

/// eta(U) = -rho sigma(rho, e(U)).
template <std::floating_point Real>
Real lax_entropy(const EosModel& model, const Vec3<Real>& u) {
  const Real e = internal_energy(u);
  return -u[0] * model.specific_entropy(u[0], e);
}

inline double lax_entropy(const EosModel& model, const ConservedState& u) {
  return lax_entropy(model, u.as_vec());
}

/// eta(U) = -Sigma(rho, 1, rho e(U)), the extensive route.
inline double lax_entropy_extensive(const EosModel& model, const ConservedState& u) {
  const double rho_e = u.eps - u.q * u.q / (2.0 * u.rho);
  if (!(u.rho > 0.0)) throw DomainError("density must be positive");
  return -sigma_extensive(model, {u.rho, 1.0, rho_e});
}

/// xi(U) = u eta(U): the flux of -rho s.
inline double lax_entropy_flux(const EosModel& model, const ConservedState& u) {
  return (u.q / u.rho) * lax_entropy(model, u);
}

/// f(U) = (rho u, rho u^2 + p, (eps + p) u).
inline Vec3<double> euler_flux(const EosModel& model, const ConservedState& u,
                               const ThermoOptions& opts = {}) {
  const double e = internal_energy(u);
  const double p = pressure(model, u.rho, e, opts);
  const double vel = u.q / u.rho;
  return {u.q, u.q * vel + p, (u.eps + p) * vel};
}

namespace detail {

inline Vec3<double> fd_steps(const Vec3<double>& x, double h) {
  return {h * (1.0 + std::abs(x[0])), h * (1.0 + std::abs(x[1])), h * (1.0 + std::abs(x[2]))};
}

template <class F>
Vec3<double> central_gradient(F&& f, const Vec3<double>& x, const Vec3<double>& h) {
  Vec3<double> g{};
  for (std::size_t i = 0; i < 3; ++i) {
    Vec3<double> xp = x, xm = x;
    xp[i] += h[i];
    xm[i] -= h[i];
    g[i] = (f(xp) - f(xm)) / (2.0 * h[i]);
  }
  return g;
}

}  // namespace detail

/// grad_U eta by central differences with steps h (1 + |U_i|).
inline Vec3<double> entropy_variables_fd(const EosModel& model, const ConservedState& u, double h) {
  return detail::central_gradient(
      [&](const Vec3<double>& x) { return lax_entropy(model, x); }, u.as_vec(), detail::fd_steps(u.as_vec(), h));
}

/// grad_U eta. Closed-form models use the chain rule through e(U); tabulated
/// models fall back to central differences with base step `fd_step`.
inline Vec3<double> entropy_variables(const EosModel& model, const ConservedState& u, double fd_step = 1e-5) {
  if (!model.is_closed_form()) return entropy_variables_fd(model, u, fd_step);
  const double rho = u.rho;
  const double e = internal_energy(u);
  const double s = sigma_specific(model, rho, e);
  const auto [ds_drho, ds_de] = model.analytic_specific_gradient(rho, e);
  const double de_drho = -u.eps / (rho * rho) + u.q * u.q / (rho * rho * rho);
  return {-s - rho * (ds_drho + ds_de * de_drho), ds_de * u.q / rho, -ds_de};
}

inline LaxPair lax_pair(const EosModel& model, const ConservedState& u, double fd_step = 1e-5) {
  LaxPair lp;
  lp.eta = lax_entropy(model, u);
  lp.xi = (u.q / u.rho) * lp.eta;
  lp.phi = entropy_variables(model, u, fd_step);
  return lp;
}

/// Jacobian d f_i / d U_j by central differences.
inline Mat3<double> flux_jacobian_fd(const EosModel& model, const ConservedState& u, double h,
                                     const ThermoOptions& opts = {}) {
  const Vec3<double> x = u.as_vec();
  const Vec3<double> step = detail::fd_steps(x, h);
  Mat3<double> jac{};
  for (std::size_t j = 0; j < 3; ++j) {
    Vec3<double> xp = x, xm = x;
    xp[j] += step[j];
    xm[j] -= step[j];
    const auto fp = euler_flux(model, ConservedState::from_vec(xp), opts);
    const auto fm = euler_flux(model, ConservedState::from_vec(xm), opts);
    for (std::size_t i = 0; i < 3; ++i) jac[i][j] = (fp[i] - fm[i]) / (2.0 * step[j]);
  }
  return jac;
}

/// max_j | d xi/d U_j - sum_i phi_i d f_i/d U_j |. Zero in exact arithmetic
/// when (eta, xi) is an entropy pair for the Euler flux.
inline double compatibility_residual(const EosModel& model, const ConservedState& u, double h,
                                     const ThermoOptions& opts = {}) {
  const Vec3<double> x = u.as_vec();
  const Vec3<double> grad_xi = detail::central_gradient(
      [&](const Vec3<double>& v) { return lax_entropy_flux(model, ConservedState::from_vec(v)); }, x,
      detail::fd_steps(x, h));
  const Vec3<double> phi = entropy_variables(model, u, h);
  const Mat3<double> jac = flux_jacobian_fd(model, u, h, opts);
  double worst = 0.0;
  for (std::size_t j = 0; j < 3; ++j) {
    double r = grad_xi[j];
    for (std::size_t i = 0; i < 3; ++i) r -= phi[i] * jac[i][j];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace entropygate
