#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "entropygate/core.hpp"

namespace entropygate {

/// Mass, volume and internal energy of a closed system.
struct ExtensiveState {
  double M = 1.0;
  double V = 1.0;
  double E = 1.0;

  friend ExtensiveState operator+(const ExtensiveState& a, const ExtensiveState& b) {
    return {a.M + b.M, a.V + b.V, a.E + b.E};
  }
  friend ExtensiveState operator*(double s, const ExtensiveState& a) {
    return {s * a.M, s * a.V, s * a.E};
  }
  [[nodiscard]] Vec3<double> as_vec() const { return {M, V, E}; }
};

/// Parameters of the constant-specific-heat entropy law. The reference
/// constants only shift the entropy by a term linear in M.
struct PolytropicParams {
  double gamma = 1.4;
  double cv = 1.0;
  double m0 = 1.0;
  double v0 = 1.0;
  double e0 = 1.0;
};

// -----------------------------------------------------------------------------
// Tabulated specific entropy sigma(rho, e)
// -----------------------------------------------------------------------------

/// Rectangular table of specific entropy values on strictly increasing
/// (rho, e) axes, interpolated bilinearly.
class EntropyTable {
 public:
  EntropyTable(std::vector<double> rho_axis, std::vector<double> e_axis,
               std::vector<double> values)
      : rho_(std::move(rho_axis)), e_(std::move(e_axis)), values_(std::move(values)) {
    check_axis(rho_, "rho-axis");
    check_axis(e_, "e-axis");
    if (values_.size() != rho_.size() * e_.size())
      throw std::invalid_argument("table value count " + std::to_string(values_.size()) +
                                  " does not match axes " + std::to_string(rho_.size()) +
                                  "x" + std::to_string(e_.size()));
  }

  [[nodiscard]] const std::vector<double>& rho_axis() const noexcept { return rho_; }
  [[nodiscard]] const std::vector<double>& e_axis() const noexcept { return e_; }
  [[nodiscard]] double value(std::size_t i, std::size_t j) const {
    return values_[i * e_.size() + j];
  }

  [[nodiscard]] Interval rho_range() const noexcept { return {rho_.front(), rho_.back()}; }
  [[nodiscard]] Interval e_range() const noexcept { return {e_.front(), e_.back()}; }

  [[nodiscard]] bool covers(double rho, double e) const noexcept {
    return rho_range().contains(rho) && e_range().contains(e);
  }

  /// Width of the rho-cell containing `rho` (clamped to the table).
  [[nodiscard]] double rho_spacing(double rho) const noexcept { return cell_width(rho_, rho); }
  [[nodiscard]] double e_spacing(double e) const noexcept { return cell_width(e_, e); }

  [[nodiscard]] double max_rho_spacing() const noexcept { return max_width(rho_); }
  [[nodiscard]] double max_e_spacing() const noexcept { return max_width(e_); }

  template <std::floating_point Real>
  [[nodiscard]] Real interpolate(Real rho, Real e) const {
    if (!(rho >= static_cast<Real>(rho_.front()) && rho <= static_cast<Real>(rho_.back())) ||
        !(e >= static_cast<Real>(e_.front()) && e <= static_cast<Real>(e_.back()))) {
      std::ostringstream msg;
      msg << "(rho, e) = (" << static_cast<double>(rho) << ", " << static_cast<double>(e)
          << ") outside table [" << rho_.front() << ", " << rho_.back() << "] x ["
          << e_.front() << ", " << e_.back() << "]";
      throw TableRangeError(msg.str());
    }
    const std::size_t i = locate(rho_, static_cast<double>(rho));
    const std::size_t j = locate(e_, static_cast<double>(e));
    const Real tr = (rho - static_cast<Real>(rho_[i])) /
                    static_cast<Real>(rho_[i + 1] - rho_[i]);
    const Real te = (e - static_cast<Real>(e_[j])) / static_cast<Real>(e_[j + 1] - e_[j]);
    const Real f00 = value(i, j), f01 = value(i, j + 1);
    const Real f10 = value(i + 1, j), f11 = value(i + 1, j + 1);
    return (1 - tr) * ((1 - te) * f00 + te * f01) + tr * ((1 - te) * f10 + te * f11);
  }

 private:
  static void check_axis(const std::vector<double>& axis, const char* name) {
    if (axis.size() < 2)
      throw std::invalid_argument(std::string(name) + " needs at least two points");
    for (std::size_t k = 1; k < axis.size(); ++k)
      if (!(axis[k] > axis[k - 1]))
        throw std::invalid_argument(std::string(name) + " is not strictly increasing at index " +
                                    std::to_string(k));
  }

  // Index of the lower node of the cell containing x; the upper edge maps to
  // the last cell.
  static std::size_t locate(const std::vector<double>& axis, double x) noexcept {
    auto it = std::upper_bound(axis.begin(), axis.end(), x);
    std::size_t k = it == axis.begin() ? 0 : static_cast<std::size_t>(it - axis.begin()) - 1;
    return std::min(k, axis.size() - 2);
  }

  static double cell_width(const std::vector<double>& axis, double x) noexcept {
    const double xc = std::clamp(x, axis.front(), axis.back());
    const std::size_t k = locate(axis, xc);
    return axis[k + 1] - axis[k];
  }

  static double max_width(const std::vector<double>& axis) noexcept {
    double w = 0.0;
    for (std::size_t k = 1; k < axis.size(); ++k) w = std::max(w, axis[k] - axis[k - 1]);
    return w;
  }

  std::vector<double> rho_;
  std::vector<double> e_;
  std::vector<double> values_;  // row i = rho_[i]
};

// -----------------------------------------------------------------------------
// Equation-of-state models
// -----------------------------------------------------------------------------

enum class EosKind { polytropic, pathological_gamma, negative_temperature, tabulated };

inline const char* to_string(EosKind k) noexcept {
  switch (k) {
    case EosKind::polytropic: return "polytropic";
    case EosKind::pathological_gamma: return "pathological-gamma";
    case EosKind::negative_temperature: return "negative-temperature";
    case EosKind::tabulated: return "tabulated";
  }
  return "unknown";
}

/// An equation of state given by its thermostatic entropy. Immutable once
/// built; copies share the table of a tabulated model.
///
/// Closed-form laws:
///   polytropic / pathological-gamma:
///     S(M,V,E) = M cv [ log(E m0 / (e0 M)) + (gamma-1) log(V m0 / (v0 M)) ]
///   negative-temperature:
///     S(M,V,E) = -(E^2 + V^2) / M
/// A tabulated model stores sigma(rho, e) and defines S(M,V,E) = M sigma(M/V, E/M),
/// so first-order homogeneity holds by construction for every kind.
class EosModel {
 public:
  static EosModel polytropic(const PolytropicParams& p = {}) {
    validate(p, "polytropic");
    return EosModel(EosKind::polytropic, p);
  }

  /// Same entropy law as polytropic, intended for gamma < 1 where concavity fails.
  static EosModel pathological_gamma(const PolytropicParams& p) {
    validate(p, "pathological-gamma");
    return EosModel(EosKind::pathological_gamma, p);
  }

  static EosModel negative_temperature() {
    return EosModel(EosKind::negative_temperature, std::monostate{});
  }

  static EosModel tabulated(EntropyTable table) {
    return EosModel(EosKind::tabulated, std::make_shared<const EntropyTable>(std::move(table)));
  }

  [[nodiscard]] EosKind kind() const noexcept { return kind_; }

  [[nodiscard]] bool is_closed_form() const noexcept { return kind_ != EosKind::tabulated; }

  [[nodiscard]] const PolytropicParams* polytropic_params() const noexcept {
    return std::get_if<PolytropicParams>(&law_);
  }

  [[nodiscard]] const EntropyTable* table() const noexcept {
    auto p = std::get_if<std::shared_ptr<const EntropyTable>>(&law_);
    return p ? p->get() : nullptr;
  }

  [[nodiscard]] std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    os << to_string(kind_);
    if (auto p = polytropic_params())
      os << "(gamma=" << p->gamma << ", cv=" << p->cv << ", m0=" << p->m0 << ", v0=" << p->v0
         << ", e0=" << p->e0 << ")";
    if (auto t = table())
      os << "(" << t->rho_axis().size() << "x" << t->e_axis().size() << ")";
    return os.str();
  }

  /// Admissible specific states.
  [[nodiscard]] bool admits(double rho, double e) const noexcept {
    if (!(rho > 0.0) || !std::isfinite(rho) || !std::isfinite(e)) return false;
    switch (kind_) {
      case EosKind::polytropic:
      case EosKind::pathological_gamma: return e > 0.0;
      case EosKind::negative_temperature: return true;
      case EosKind::tabulated: return table()->covers(rho, e);
    }
    return false;
  }

  [[nodiscard]] bool admits(const ExtensiveState& s) const noexcept {
    if (!(s.M > 0.0) || !(s.V > 0.0) || !std::isfinite(s.E)) return false;
    switch (kind_) {
      case EosKind::polytropic:
      case EosKind::pathological_gamma: return s.E > 0.0;
      case EosKind::negative_temperature: return true;
      case EosKind::tabulated: return table()->covers(s.M / s.V, s.E / s.M);
    }
    return false;
  }

  /// Sigma(M, V, E).
  template <std::floating_point Real>
  [[nodiscard]] Real entropy(Real M, Real V, Real E) const {
    if (!(M > 0) || !(V > 0)) throw DomainError(domain_message("M and V must be positive", M, V, E));
    switch (kind_) {
      case EosKind::polytropic:
      case EosKind::pathological_gamma: {
        if (!(E > 0)) throw DomainError(domain_message("internal energy E must be positive", M, V, E));
        const auto& p = std::get<PolytropicParams>(law_);
        const Real cv = p.cv, g = p.gamma, m0 = p.m0, v0 = p.v0, e0 = p.e0;
        using std::log;
        return M * cv * (log(E * m0 / (e0 * M)) + (g - 1) * log(V * m0 / (v0 * M)));
      }
      case EosKind::negative_temperature:
        return -(E * E + V * V) / M;
      case EosKind::tabulated:
        return M * table()->interpolate(M / V, E / M);
    }
    return Real(0);
  }

  /// sigma(rho, e) = Sigma(1, 1/rho, e).
  template <std::floating_point Real>
  [[nodiscard]] Real specific_entropy(Real rho, Real e) const {
    if (!(rho > 0)) throw DomainError("density must be positive (rho = " + num(rho) + ")");
    if (kind_ == EosKind::tabulated) return table()->interpolate(rho, e);
    return entropy<Real>(Real(1), Real(1) / rho, e);
  }

  /// Analytic (d sigma/d rho, d sigma/d e); closed-form models only.
  [[nodiscard]] std::pair<double, double> analytic_specific_gradient(double rho, double e) const {
    if (!admits(rho, e)) throw DomainError("(rho, e) = (" + num(rho) + ", " + num(e) + ") not admissible");
    switch (kind_) {
      case EosKind::polytropic:
      case EosKind::pathological_gamma: {
        const auto& p = std::get<PolytropicParams>(law_);
        return {-p.cv * (p.gamma - 1.0) / rho, p.cv / e};
      }
      case EosKind::negative_temperature:
        return {2.0 / (rho * rho * rho), -2.0 * e};
      case EosKind::tabulated: break;
    }
    throw std::logic_error("analytic gradient requested for a tabulated model");
  }

  /// Analytic (dS/dM, dS/dV, dS/dE); closed-form models only.
  [[nodiscard]] Vec3<double> analytic_extensive_gradient(const ExtensiveState& s) const {
    if (!admits(s)) throw DomainError(domain_message("state not admissible", s.M, s.V, s.E));
    switch (kind_) {
      case EosKind::polytropic:
      case EosKind::pathological_gamma: {
        const auto& p = std::get<PolytropicParams>(law_);
        const double sigma = entropy(s.M, s.V, s.E);
        return {sigma / s.M - p.cv * p.gamma, s.M * p.cv * (p.gamma - 1.0) / s.V, s.M * p.cv / s.E};
      }
      case EosKind::negative_temperature:
        return {(s.E * s.E + s.V * s.V) / (s.M * s.M), -2.0 * s.V / s.M, -2.0 * s.E / s.M};
      case EosKind::tabulated: break;
    }
    throw std::logic_error("analytic gradient requested for a tabulated model");
  }

 private:
  using Law = std::variant<std::monostate, PolytropicParams, std::shared_ptr<const EntropyTable>>;

  EosModel(EosKind k, Law law) : kind_(k), law_(std::move(law)) {}

  static void validate(const PolytropicParams& p, const char* what) {
    if (!(p.gamma > 0.0) || !(p.cv > 0.0) || !(p.m0 > 0.0) || !(p.v0 > 0.0) || !(p.e0 > 0.0))
      throw std::invalid_argument(std::string(what) +
                                  ": gamma, cv and the reference constants must be positive");
  }

  template <class T>
  static std::string num(T x) {
    std::ostringstream os;
    os.precision(17);
    os << static_cast<double>(x);
    return os.str();
  }

  template <class T>
  static std::string domain_message(const char* what, T M, T V, T E) {
    return std::string(what) + " at (M, V, E) = (" + num(M) + ", " + num(V) + ", " + num(E) + ")";
  }

  EosKind kind_;
  Law law_;
};

// -----------------------------------------------------------------------------
// Operations
// -----------------------------------------------------------------------------

inline double sigma_extensive(const EosModel& model, const ExtensiveState& s) {
  return model.entropy(s.M, s.V, s.E);
}

inline double sigma_specific(const EosModel& model, double rho, double e) {
  return model.specific_entropy(rho, e);
}

/// max over lambda of |S(l s) - l S(s)| / (1 + |l S(s)|).
inline double check_homogeneity(const EosModel& model, const ExtensiveState& s,
                                const std::vector<double>& lambdas) {
  const double base = sigma_extensive(model, s);
  double worst = 0.0;
  for (double lambda : lambdas) {
    if (!(lambda > 0.0)) throw std::invalid_argument("scaling factors must be positive");
    const double scaled = sigma_extensive(model, lambda * s);
    worst = std::max(worst, std::abs(scaled - lambda * base) / (1.0 + std::abs(lambda * base)));
  }
  return worst;
}

/// S(a + b) - S(a) - S(b); non-negative for a superadditive entropy.
inline double check_superadditivity(const EosModel& model, const ExtensiveState& a,
                                    const ExtensiveState& b) {
  return sigma_extensive(model, a + b) - sigma_extensive(model, a) - sigma_extensive(model, b);
}

/// Samples `source` on the given axes.
inline EntropyTable tabulate(const EosModel& source, const std::vector<double>& rho_axis,
                             const std::vector<double>& e_axis) {
  std::vector<double> values;
  values.reserve(rho_axis.size() * e_axis.size());
  for (double rho : rho_axis)
    for (double e : e_axis) values.push_back(sigma_specific(source, rho, e));
  return EntropyTable(rho_axis, e_axis, std::move(values));
}

/// n equally spaced points on [lo, hi], endpoints included.
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw std::invalid_argument("linspace needs at least two points");
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k)
    x[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  x.back() = hi;
  return x;
}

}  // namespace entropygate
