#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace entropygate {

template <std::floating_point Real>
using Vec3 = std::array<Real, 3>;

/// Row-major dense 3x3 matrix.
template <std::floating_point Real>
using Mat3 = std::array<std::array<Real, 3>, 3>;

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] constexpr bool contains(double x) const noexcept {
    return x >= lo && x <= hi;
  }
  [[nodiscard]] constexpr double width() const noexcept { return hi - lo; }
};

// -----------------------------------------------------------------------------
// Error hierarchy
// -----------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Evaluation requested outside the model's admissible domain.
struct DomainError : Error {
  using Error::Error;
};

/// (rho, e) fell outside the rectangle covered by a tabulated model.
struct TableRangeError : DomainError {
  using DomainError::DomainError;
};

/// A derivative that must be inverted is numerically zero.
struct DegenerateError : Error {
  using Error::Error;
};

/// No sample of a certification region was usable.
struct InfeasibleRegion : Error {
  using Error::Error;
};

/// Malformed tabulated EOS text.
struct TableParseError : Error {
  TableParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_number(line) {}
  std::size_t line_number;
};

// -----------------------------------------------------------------------------
// Small vector helpers
// -----------------------------------------------------------------------------

template <std::floating_point To, std::floating_point From>
constexpr Vec3<To> cast3(const Vec3<From>& v) noexcept {
  return {static_cast<To>(v[0]), static_cast<To>(v[1]), static_cast<To>(v[2])};
}

template <std::floating_point Real>
Real norm2(const Vec3<Real>& v) noexcept {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

template <std::floating_point Real>
Vec3<Real> mat_vec(const Mat3<Real>& a, const Vec3<Real>& v) noexcept {
  Vec3<Real> r{};
  for (std::size_t i = 0; i < 3; ++i)
    r[i] = a[i][0] * v[0] + a[i][1] * v[1] + a[i][2] * v[2];
  return r;
}

template <std::floating_point Real>
Real frobenius_norm(const Mat3<Real>& a) noexcept {
  Real s = 0;
  for (const auto& row : a)
    for (Real x : row) s += x * x;
  return std::sqrt(s);
}

template <std::floating_point Real>
Real max_abs_entry(const Mat3<Real>& a) noexcept {
  Real m = 0;
  for (const auto& row : a)
    for (Real x : row) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace entropygate
