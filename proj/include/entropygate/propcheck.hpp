#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "entropygate/convexity.hpp"
#include "entropygate/eos.hpp"
#include "entropygate/lax.hpp"

namespace entropygate {

// -----------------------------------------------------------------------------
// Equivalence of Sigma concavity + T > 0 with eta convexity
// -----------------------------------------------------------------------------

struct Witness {
  std::string check;  // "sigma", "temperature" or "eta"
  std::vector<double> point;
  double value = 0.0;  // eigenvalue or temperature; NaN when degenerate
};

struct EquivalenceVerdict {
  bool sigma_concave = false;
  bool temperature_positive = false;
  bool eta_convex = false;
  /// (sigma_concave && temperature_positive) == eta_convex
  bool consistent = false;
  std::vector<Witness> witnesses;
  std::vector<std::string> warnings;

  ConvexityReport sigma;
  TemperatureReport temperature;
  ConvexityReport eta;
  Region2 temperature_region;
};

/// The (rho, e) box covered by the extensive box (rho = M/V, e = E/M).
inline Region2 specific_image(const Region3& ext) {
  Region2 r;
  const auto& [m, v, E] = ext.bounds;
  r.bounds = {Interval{m.lo / v.hi, m.hi / v.lo}, Interval{E.lo / m.hi, E.hi / m.lo}};
  r.sample_count = ext.sample_count;
  r.sampling = ext.sampling;
  r.seed = ext.seed;
  return r;
}

/// Bounding (rho, e) box of a conserved-variable box, clipped by its energy window.
inline Region2 specific_image_conserved(const Region3& cons) {
  const auto& [rho, q, eps] = cons.bounds;
  const double q2max = std::max(q.lo * q.lo, q.hi * q.hi);
  const double q2min = (q.lo <= 0.0 && q.hi >= 0.0) ? 0.0 : std::min(q.lo * q.lo, q.hi * q.hi);
  auto e_at = [](double r, double qq, double en) { return en / r - qq / (2.0 * r * r); };
  double elo = std::min({e_at(rho.lo, q2max, eps.lo), e_at(rho.hi, q2max, eps.lo)});
  double ehi = std::max({e_at(rho.lo, q2min, eps.hi), e_at(rho.hi, q2min, eps.hi)});
  if (cons.energy_window) {
    elo = std::max(elo, cons.energy_window->lo);
    ehi = std::min(ehi, cons.energy_window->hi);
  }
  Region2 r;
  r.bounds = {rho, Interval{elo, ehi}};
  return r;
}

inline EquivalenceVerdict equivalence_check(const EosModel& model, const Region3& region_extensive,
                                            const Region3& region_conserved,
                                            std::optional<Region2> region_thermo = std::nullopt,
                                            const CertifyOptions& opts = {}) {
  EquivalenceVerdict v;
  v.temperature_region = region_thermo ? *region_thermo : specific_image(region_extensive);

  const Region2 a = specific_image(region_extensive);
  const Region2 b = specific_image_conserved(region_conserved);
  auto overlap = [](const Interval& x, const Interval& y) { return x.lo <= y.hi && y.lo <= x.hi; };
  if (!overlap(a.bounds[0], b.bounds[0]) || !overlap(a.bounds[1], b.bounds[1]) ||
      !(b.bounds[1].lo < b.bounds[1].hi))
    v.warnings.push_back("conserved region's (rho, e) image does not overlap the extensive region's");

  v.sigma = certify_sigma_concave(model, region_extensive, opts);
  v.temperature = certify_temperature_positive(model, v.temperature_region, opts.thermo);
  v.eta = certify_eta_convex(model, region_conserved, opts);

  v.sigma_concave = v.sigma.verdict == Verdict::certified_concave;
  v.temperature_positive = v.temperature.all_positive;
  v.eta_convex = v.eta.verdict == Verdict::certified_convex;
  v.consistent = (v.sigma_concave && v.temperature_positive) == v.eta_convex;

  auto pt = [](const Vec3<double>& x) { return std::vector<double>(x.begin(), x.end()); };
  if (!v.sigma_concave) v.witnesses.push_back({"sigma", pt(v.sigma.worst_point), v.sigma.worst_eigenvalue});
  if (!v.temperature_positive && v.temperature.witness) {
    const auto& w = *v.temperature.witness;
    v.witnesses.push_back({"temperature", {w[0], w[1]},
                           v.temperature.witness_temperature.value_or(std::numeric_limits<double>::quiet_NaN())});
  }
  if (!v.eta_convex) v.witnesses.push_back({"eta", pt(v.eta.worst_point), v.eta.worst_eigenvalue});
  if (v.sigma.verdict == Verdict::indeterminate) v.warnings.push_back("sigma certificate indeterminate");
  if (v.eta.verdict == Verdict::indeterminate) v.warnings.push_back("eta certificate indeterminate");
  return v;
}

// -----------------------------------------------------------------------------
// Constructions from the proof of the equivalence
// -----------------------------------------------------------------------------

/// Internal energy per unit volume of (1-t) U1 + t U2:
/// (1-t) eps1 + t eps2 - ((1-t) q1 + t q2)^2 / (2 ((1-t) rho1 + t rho2)).
inline double mixing_energy(const ConservedState& u1, const ConservedState& u2, double t) {
  const double rho = (1.0 - t) * u1.rho + t * u2.rho;
  if (!(rho > 0.0)) throw DomainError("mixed density must be positive");
  const double q = (1.0 - t) * u1.q + t * u2.q;
  return (1.0 - t) * u1.eps + t * u2.eps - 0.5 * q * q / rho;
}

/// mixing_energy minus its lower bound from convexity of q^2/rho; never negative.
inline double mixing_lower_bound_gap(const ConservedState& u1, const ConservedState& u2, double t) {
  if (!(u1.rho > 0.0) || !(u2.rho > 0.0)) throw DomainError("densities must be positive");
  const double bound = (1.0 - t) * u1.eps + t * u2.eps -
                       0.5 * ((1.0 - t) * u1.q * u1.q / u1.rho + t * u2.q * u2.q / u2.rho);
  return mixing_energy(u1, u2, t) - bound;
}

/// The pair U1 = (rho, sqrt(8 rho dE), E + 4 dE), U2 = (rho, 0, E). Both carry
/// internal energy per unit volume E; their mixtures carry E + 4 t (1-t) dE.
inline std::pair<ConservedState, ConservedState> delta_e_states(double rho, double E, double dE) {
  if (!(rho > 0.0)) throw DomainError("density must be positive");
  if (!(dE > 0.0)) throw DomainError("energy increment must be positive");
  return {ConservedState{rho, std::sqrt(8.0 * rho * dE), E + 4.0 * dE}, ConservedState{rho, 0.0, E}};
}

/// Same as above, additionally requiring every internal energy met along the
/// segment to be admissible for `model`.
inline std::pair<ConservedState, ConservedState> delta_e_states(const EosModel& model, double rho, double E,
                                                                double dE) {
  auto states = delta_e_states(rho, E, dE);
  if (!model.admits(rho, E / rho) || !model.admits(rho, (E + dE) / rho))
    throw DomainError("delta-E states leave the admissible domain of " + model.describe());
  return states;
}

/// (1-t) eta(U1) + t eta(U2) - eta((1-t) U1 + t U2).
inline double jensen_gap_eta(const EosModel& model, const ConservedState& u1, const ConservedState& u2,
                             double t) {
  const ConservedState mid{(1.0 - t) * u1.rho + t * u2.rho, (1.0 - t) * u1.q + t * u2.q,
                           (1.0 - t) * u1.eps + t * u2.eps};
  return (1.0 - t) * lax_entropy(model, u1) + t * lax_entropy(model, u2) - lax_entropy(model, mid);
}

struct Prop1Report {
  double worst_margin = std::numeric_limits<double>::infinity();
  ExtensiveState worst_a{};
  ExtensiveState worst_b{};
  double worst_t = 0.0;
  /// Largest |direct margin - margin via the unit-volume reduction|.
  double max_route_discrepancy = 0.0;
  std::size_t combinations_checked = 0;
};

/// Concavity margin S((1-t) a + t b) - (1-t) S(a) - t S(b), evaluated directly
/// and through the reduction to unit volume that homogeneity permits.
inline Prop1Report prop1_spotcheck(const EosModel& model,
                                   const std::vector<std::pair<ExtensiveState, ExtensiveState>>& pairs,
                                   const std::vector<double>& ts) {
  Prop1Report rep;
  for (const auto& [a, b] : pairs) {
    for (double t : ts) {
      const ExtensiveState mix = (1.0 - t) * a + t * b;
      const double direct = sigma_extensive(model, mix) - (1.0 - t) * sigma_extensive(model, a) -
                            t * sigma_extensive(model, b);
      const double vbar = mix.V;
      const double w = (1.0 - t) * a.V / vbar;
      const ExtensiveState ua{a.M / a.V, 1.0, a.E / a.V}, ub{b.M / b.V, 1.0, b.E / b.V};
      const ExtensiveState umix = w * ua + (1.0 - w) * ub;
      const double reduced = vbar * (sigma_extensive(model, {umix.M, 1.0, umix.E}) -
                                     w * sigma_extensive(model, ua) - (1.0 - w) * sigma_extensive(model, ub));
      ++rep.combinations_checked;
      rep.max_route_discrepancy = std::max(rep.max_route_discrepancy, std::abs(direct - reduced));
      if (direct < rep.worst_margin) {
        rep.worst_margin = direct;
        rep.worst_a = a;
        rep.worst_b = b;
        rep.worst_t = t;
      }
    }
  }
  return rep;
}

}  // namespace entropygate
