#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "entropygate/core.hpp"
#include "entropygate/eos.hpp"
#include "entropygate/lax.hpp"
#include "entropygate/thermo.hpp"

namespace entropygate {

// -----------------------------------------------------------------------------
// Hessian and eigenvalues
// -----------------------------------------------------------------------------

/// Second-order central-difference Hessian of f at x with per-coordinate
/// steps h. Diagonal entries use the three-point stencil, off-diagonal
/// entries the four-point cross stencil; the result is symmetric.
template <std::floating_point Real, class F>
Mat3<Real> hessian3(F&& f, const Vec3<Real>& x, const Vec3<Real>& h) {
  auto at = [&](std::size_t i, Real si, std::size_t j, Real sj) {
    Vec3<Real> y = x;
    y[i] += si * h[i];
    y[j] += sj * h[j];
    return static_cast<Real>(f(y));
  };
  const Real f0 = static_cast<Real>(f(x));
  Mat3<Real> H{};
  for (std::size_t i = 0; i < 3; ++i) {
    Vec3<Real> yp = x, ym = x;
    yp[i] += h[i];
    ym[i] -= h[i];
    H[i][i] = (static_cast<Real>(f(yp)) - 2 * f0 + static_cast<Real>(f(ym))) / (h[i] * h[i]);
  }
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      const Real v = (at(i, 1, j, 1) - at(i, 1, j, -1) - at(i, -1, j, 1) + at(i, -1, j, -1)) /
                     (4 * h[i] * h[j]);
      H[i][j] = v;
      H[j][i] = v;
    }
  }
  return H;
}

/// All three eigenvalues of a symmetric 3x3 matrix in ascending order, by the
/// trigonometric solution of the characteristic polynomial.
template <std::floating_point Real>
std::array<Real, 3> eigenvalues_sym3(const Mat3<Real>& a) {
  using W = long double;
  const W a00 = a[0][0], a11 = a[1][1], a22 = a[2][2];
  const W a01 = (W(a[0][1]) + W(a[1][0])) / 2;
  const W a02 = (W(a[0][2]) + W(a[2][0])) / 2;
  const W a12 = (W(a[1][2]) + W(a[2][1])) / 2;
  const W p1 = a01 * a01 + a02 * a02 + a12 * a12;
  std::array<W, 3> ev{};
  if (p1 == 0) {
    ev = {a00, a11, a22};
  } else {
    const W q = (a00 + a11 + a22) / 3;
    const W p2 = (a00 - q) * (a00 - q) + (a11 - q) * (a11 - q) + (a22 - q) * (a22 - q) + 2 * p1;
    const W p = std::sqrt(p2 / 6);
    const W b00 = (a00 - q) / p, b11 = (a11 - q) / p, b22 = (a22 - q) / p;
    const W b01 = a01 / p, b02 = a02 / p, b12 = a12 / p;
    const W det = b00 * (b11 * b22 - b12 * b12) - b01 * (b01 * b22 - b12 * b02) +
                  b02 * (b01 * b12 - b11 * b02);
    const W r = std::clamp(det / 2, W(-1), W(1));
    const W phi = std::acos(r) / 3;
    const W pi = std::numbers::pi_v<long double>;
    const W hi = q + 2 * p * std::cos(phi);
    const W lo = q + 2 * p * std::cos(phi + 2 * pi / 3);
    ev = {lo, 3 * q - hi - lo, hi};
  }
  std::sort(ev.begin(), ev.end());
  return {static_cast<Real>(ev[0]), static_cast<Real>(ev[1]), static_cast<Real>(ev[2])};
}

template <std::floating_point Real>
std::pair<Real, Real> min_max_eigenvalues_sym3(const Mat3<Real>& a) {
  const auto ev = eigenvalues_sym3(a);
  return {ev[0], ev[2]};
}

// -----------------------------------------------------------------------------
// Regions and sampling
// -----------------------------------------------------------------------------

enum class Sampling { grid, uniform_random };

/// Axis-aligned box with a sampling rule. For checks in conserved or
/// Lagrangian coordinates, `energy_window` restricts samples to those whose
/// specific internal energy lies inside it.
template <std::size_t Dim>
struct Region {
  std::array<Interval, Dim> bounds{};
  std::size_t sample_count = 512;
  Sampling sampling = Sampling::grid;
  std::uint64_t seed = 42;
  std::optional<Interval> energy_window;

  void validate() const {
    for (std::size_t i = 0; i < Dim; ++i)
      if (!(bounds[i].lo < bounds[i].hi))
        throw std::invalid_argument("region axis " + std::to_string(i) + ": lower bound " +
                                    std::to_string(bounds[i].lo) + " is not below upper bound " +
                                    std::to_string(bounds[i].hi));
    if (sample_count == 0) throw std::invalid_argument("region needs at least one sample");
    if (energy_window && !(energy_window->lo < energy_window->hi))
      throw std::invalid_argument("energy window lower bound is not below its upper bound");
  }
};

using Region2 = Region<2>;
using Region3 = Region<3>;

/// Grid sampling uses ceil(count^(1/Dim)) points per axis, endpoints
/// included; random sampling draws exactly `sample_count` points.
template <std::size_t Dim>
std::vector<std::array<double, Dim>> sample_points(const Region<Dim>& region) {
  region.validate();
  std::vector<std::array<double, Dim>> pts;
  if (region.sampling == Sampling::uniform_random) {
    std::mt19937_64 rng(region.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    pts.resize(region.sample_count);
    for (auto& p : pts)
      for (std::size_t i = 0; i < Dim; ++i)
        p[i] = region.bounds[i].lo + unit(rng) * region.bounds[i].width();
    return pts;
  }
  std::size_t n = 1;
  auto total = [&](std::size_t m) {
    std::size_t t = 1;
    for (std::size_t i = 0; i < Dim; ++i) t *= m;
    return t;
  };
  while (total(n) < region.sample_count) ++n;
  auto coord = [&](std::size_t axis, std::size_t k) {
    if (n == 1) return 0.5 * (region.bounds[axis].lo + region.bounds[axis].hi);
    return region.bounds[axis].lo +
           region.bounds[axis].width() * static_cast<double>(k) / static_cast<double>(n - 1);
  };
  pts.reserve(total(n));
  std::array<std::size_t, Dim> idx{};
  for (std::size_t flat = 0; flat < total(n); ++flat) {
    std::size_t r = flat;
    for (std::size_t i = Dim; i-- > 0;) {
      idx[i] = r % n;
      r /= n;
    }
    std::array<double, Dim> p{};
    for (std::size_t i = 0; i < Dim; ++i) p[i] = coord(i, idx[i]);
    pts.push_back(p);
  }
  return pts;
}

// -----------------------------------------------------------------------------
// Reports
// -----------------------------------------------------------------------------

enum class Verdict { certified_convex, certified_concave, violated, indeterminate };

inline const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::certified_convex: return "certified-convex";
    case Verdict::certified_concave: return "certified-concave";
    case Verdict::violated: return "violated";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "unknown";
}

/// Outcome of a sampled Hessian certificate. The verdict covers only the
/// `samples_checked` points actually evaluated.
struct ConvexityReport {
  Verdict verdict = Verdict::indeterminate;
  /// lambda_max at the worst sample for concavity checks, lambda_min for convexity checks.
  double worst_eigenvalue = 0.0;
  Vec3<double> worst_point{};
  std::size_t samples_checked = 0;
  std::size_t samples_skipped = 0;
  /// Scale-aware tolerance at the worst sample.
  double tolerance_used = 0.0;
  /// Extremes over all samples.
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

struct TemperatureReport {
  bool all_positive = true;
  double min_temperature = std::numeric_limits<double>::infinity();
  std::array<double, 2> min_point{};
  std::size_t samples_checked = 0;
  std::size_t violations = 0;
  /// First non-positive (or degenerate) sample, if any.
  std::optional<std::array<double, 2>> witness;
  std::optional<double> witness_temperature;  // empty when degenerate
};

struct CertifyOptions {
  double tol_rel = 1e-7;
  /// Closed-form models: h_i = step_rel (1 + |x_i|).
  double step_rel = 1e-4;
  /// Tabulated models: steps move (rho, e) by this many cells.
  double table_step_cells = 2.0;
  ThermoOptions thermo{};
};

enum class Coordinates { extensive, conserved, lagrangian };

namespace detail {

enum class Shape { convex, concave };

/// Finite-difference steps for a sample point.
inline Vec3<long double> hessian_steps(const EosModel& model, Coordinates coords, const Vec3<double>& x,
                                       const CertifyOptions& opts, double scale = 1.0) {
  Vec3<long double> h{};
  if (model.is_closed_form()) {
    for (std::size_t i = 0; i < 3; ++i)
      h[i] = static_cast<long double>(scale * opts.step_rel * (1.0 + std::abs(x[i])));
    return h;
  }
  const EntropyTable& t = *model.table();
  double rho = 0.0, e = 0.0;
  switch (coords) {
    case Coordinates::extensive: rho = x[0] / x[1]; e = x[2] / x[0]; break;
    case Coordinates::conserved: rho = x[0]; e = internal_energy(x); break;
    case Coordinates::lagrangian: rho = 1.0 / x[0]; e = x[2] - 0.5 * x[1] * x[1]; break;
  }
  const double k = scale * opts.table_step_cells;
  const double dr = k * t.rho_spacing(rho), de = k * t.e_spacing(e);
  Vec3<double> hd{};
  switch (coords) {
    case Coordinates::extensive: hd = {dr * x[1], dr * x[1] / rho, de * x[0]}; break;
    case Coordinates::conserved: hd = {dr, de * rho, de * rho}; break;
    case Coordinates::lagrangian: hd = {dr * x[0] * x[0], de, de}; break;
  }
  for (std::size_t i = 0; i < 3; ++i) h[i] = static_cast<long double>(hd[i]);
  return h;
}

struct SampleResult {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double tol = 0.0;
};

template <class F>
SampleResult analyse_point(F&& f, const Vec3<double>& x, const Vec3<long double>& h, double tol_rel) {
  const Mat3<long double> H = hessian3<long double>(f, cast3<long double>(x), h);
  const auto [lo, hi] = min_max_eigenvalues_sym3(H);
  return {static_cast<double>(lo), static_cast<double>(hi),
          tol_rel * (1.0 + static_cast<double>(max_abs_entry(H)))};
}

/// Excess of the offending eigenvalue over its tolerance, in tolerance units.
inline double excess_ratio(const SampleResult& r, Shape shape) {
  return (shape == Shape::concave ? r.lambda_max : -r.lambda_min) / r.tol;
}

enum class PointStatus { pass, fail, unresolved };

/// A sample that fails at the base step is re-evaluated at 1/2, 1/4, 1/8
/// and 1/16 of it. Passing at any level clears it. It fails once two
/// successive levels both exceed the tolerance and agree to 10%; if that
/// never happens it stays unresolved.
template <class F>
std::pair<PointStatus, SampleResult> refine_point(F&& f, const EosModel& model, Coordinates coords,
                                                  const Vec3<double>& x, Shape shape,
                                                  const CertifyOptions& opts, const SampleResult& base) {
  auto offending = [&](const SampleResult& r) { return shape == Shape::concave ? r.lambda_max : r.lambda_min; };
  SampleResult prev = base;
  for (double scale : {0.5, 0.25, 0.125, 0.0625}) {
    const SampleResult cur = analyse_point(f, x, hessian_steps(model, coords, x, opts, scale), opts.tol_rel);
    if (excess_ratio(cur, shape) <= 1.0) return {PointStatus::pass, cur};
    if (std::abs(offending(prev) - offending(cur)) <= 0.1 * std::abs(offending(cur))) return {PointStatus::fail, cur};
    prev = cur;
  }
  return {PointStatus::unresolved, prev};
}

/// Samples `points`, skipping those rejected by `usable` or whose stencil
/// raises DomainError when `skip_domain_errors` is set.
template <class F, class Usable>
ConvexityReport certify_shape(F&& f, const EosModel& model, Coordinates coords,
                              const std::vector<Vec3<double>>& points, Shape shape,
                              const CertifyOptions& opts, Usable&& usable, bool skip_domain_errors) {
  ConvexityReport rep;
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  rep.max_eigenvalue = -std::numeric_limits<double>::infinity();
  // Worst sample so far, ranked first by status then by excess ratio.
  int worst_rank = -1;
  double worst_ratio = -std::numeric_limits<double>::infinity();
  for (const auto& x : points) {
    if (!usable(x)) {
      ++rep.samples_skipped;
      continue;
    }
    SampleResult r;
    PointStatus status = PointStatus::pass;
    try {
      r = analyse_point(f, x, hessian_steps(model, coords, x, opts), opts.tol_rel);
      if (excess_ratio(r, shape) > 1.0) std::tie(status, r) = refine_point(f, model, coords, x, shape, opts, r);
    } catch (const DomainError&) {
      if (!skip_domain_errors) throw;
      ++rep.samples_skipped;
      continue;
    }
    ++rep.samples_checked;
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, r.lambda_min);
    rep.max_eigenvalue = std::max(rep.max_eigenvalue, r.lambda_max);
    const int rank = status == PointStatus::fail ? 2 : status == PointStatus::unresolved ? 1 : 0;
    const double ratio = excess_ratio(r, shape);
    if (rank > worst_rank || (rank == worst_rank && ratio > worst_ratio)) {
      worst_rank = rank;
      worst_ratio = ratio;
      rep.worst_point = x;
      rep.worst_eigenvalue = shape == Shape::concave ? r.lambda_max : r.lambda_min;
      rep.tolerance_used = r.tol;
    }
  }
  if (rep.samples_checked == 0) throw InfeasibleRegion("no admissible sample in region");
  switch (worst_rank) {
    case 2: rep.verdict = Verdict::violated; break;
    case 1: rep.verdict = Verdict::indeterminate; break;
    default:
      rep.verdict = shape == Shape::concave ? Verdict::certified_concave : Verdict::certified_convex;
  }
  return rep;
}

inline std::vector<Vec3<double>> as_vec3(const std::vector<std::array<double, 3>>& pts) {
  return {pts.begin(), pts.end()};
}

}  // namespace detail

/// Concavity of Sigma(M, V, E) over a box of extensive states. Sigma is
/// first-order homogeneous, so one eigenvalue is always near zero and the
/// test is semidefinite: lambda_max <= tol_rel (1 + |H|_max).
inline ConvexityReport certify_sigma_concave(const EosModel& model, const Region3& region,
                                             const CertifyOptions& opts = {}) {
  auto f = [&](const Vec3<long double>& x) { return model.entropy(x[0], x[1], x[2]); };
  return detail::certify_shape(f, model, Coordinates::extensive, detail::as_vec3(sample_points(region)),
                               detail::Shape::concave, opts, [](const Vec3<double>&) { return true; }, false);
}

/// Convexity of eta(U) = -rho s over a box in (rho, q, eps). Samples whose
/// internal energy is outside the model domain (or the region's energy
/// window), or whose stencil leaves the domain, are skipped.
inline ConvexityReport certify_eta_convex(const EosModel& model, const Region3& region,
                                          const CertifyOptions& opts = {}) {
  auto f = [&](const Vec3<long double>& u) { return lax_entropy(model, u); };
  auto usable = [&](const Vec3<double>& u) {
    if (!(u[0] > 0.0)) return false;
    const double e = internal_energy(u);
    if (region.energy_window && !region.energy_window->contains(e)) return false;
    return model.admits(u[0], e);
  };
  return detail::certify_shape(f, model, Coordinates::conserved, detail::as_vec3(sample_points(region)),
                               detail::Shape::convex, opts, usable, true);
}

/// Convexity of (tau, u, E) -> -sigma(1/tau, E - u^2/2) in Lagrangian
/// variables.
inline ConvexityReport certify_wagner(const EosModel& model, const Region3& region,
                                      const CertifyOptions& opts = {}) {
  auto f = [&](const Vec3<long double>& y) {
    return -model.specific_entropy(1.0L / y[0], y[2] - y[1] * y[1] / 2);
  };
  auto usable = [&](const Vec3<double>& y) {
    if (!(y[0] > 0.0)) return false;
    const double e = y[2] - 0.5 * y[1] * y[1];
    if (region.energy_window && !region.energy_window->contains(e)) return false;
    return model.admits(1.0 / y[0], e);
  };
  return detail::certify_shape(f, model, Coordinates::lagrangian, detail::as_vec3(sample_points(region)),
                               detail::Shape::convex, opts, usable, false);
}

/// Samples T = 1 / (d sigma/d e) over a (rho, e) box.
inline TemperatureReport certify_temperature_positive(const EosModel& model, const Region2& region,
                                                      const ThermoOptions& opts = {}) {
  TemperatureReport rep;
  for (const auto& pt : sample_points(region)) {
    ++rep.samples_checked;
    double T = 0.0;
    bool degenerate = false;
    try {
      T = temperature(model, pt[0], pt[1], opts);
    } catch (const DegenerateError&) {
      degenerate = true;
    }
    if (!degenerate && T < rep.min_temperature) {
      rep.min_temperature = T;
      rep.min_point = pt;
    }
    if (degenerate || !(T > 0.0)) {
      ++rep.violations;
      if (rep.all_positive) {
        rep.witness = pt;
        if (!degenerate) rep.witness_temperature = T;
      }
      rep.all_positive = false;
    }
  }
  return rep;
}

}  // namespace entropygate
