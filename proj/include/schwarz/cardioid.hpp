#pragma once

// The main cardioid as a quadrature domain. Its Riemann map from the unit
// disk is phi(l) = l/2 - l^2/4, and the Schwarz reflection satisfies
// sigma(phi(l)) = phi(1/conj(l)).

#include <cmath>
#include <complex>
#include <vector>

#include "schwarz/core.hpp"

namespace schwarz::cardioid {

inline constexpr double kDefaultBoundaryTol = 1e-9;
inline constexpr double kCusp = 0.25;

enum class Location { Interior, Boundary, Exterior };

struct Inversion {
  cplx inner_root;  // smaller-modulus preimage under phi
  cplx outer_root;  // 2 - inner_root
  Location location;
};

inline cplx riemann_map(cplx lambda) { return lambda / 2.0 - lambda * lambda / 4.0; }

inline cplx riemann_map_derivative(cplx lambda) { return 0.5 - lambda / 2.0; }

/// Solves l^2 - 2 l + 4 w = 0 and places w relative to the cardioid by the
/// modulus of the smaller root.
inline Inversion invert_riemann_map(cplx w, double tol_boundary = kDefaultBoundaryTol) {
  // Roots are 1 -+ sqrt(1 - 4w); the principal branch makes 1 - s the
  // smaller one.
  const cplx s = std::sqrt(1.0 - 4.0 * w);
  const cplx inner = 1.0 - s;
  const cplx outer = 1.0 + s;
  const double m = std::abs(inner);
  Location loc = Location::Boundary;
  if (m < 1.0 - tol_boundary)
    loc = Location::Interior;
  else if (m > 1.0 + tol_boundary)
    loc = Location::Exterior;
  return {inner, outer, loc};
}

inline Location locate(cplx w, double tol_boundary = kDefaultBoundaryTol) {
  return invert_riemann_map(w, tol_boundary).location;
}

/// Schwarz reflection of the closed cardioid; sigma(0) is infinity and the
/// boundary is fixed pointwise.
inline Point schwarz_sigma(cplx w, double tol_boundary = kDefaultBoundaryTol) {
  const Inversion inv = invert_riemann_map(w, tol_boundary);
  if (inv.location == Location::Exterior)
    throw Error(ErrorCode::DomainError, "schwarz_sigma: point outside the closed cardioid");
  if (inv.location == Location::Boundary) return Point(w);
  if (inv.inner_root == cplx(0.0)) return Point::infinity();
  return Point(riemann_map(1.0 / std::conj(inv.inner_root)));
}

/// All w in the closed cardioid with sigma(w) = z (zero, one or two points).
inline std::vector<cplx> sigma_preimages(const Point& z, double tol_boundary = kDefaultBoundaryTol) {
  if (z.is_infinite()) return {cplx(0.0)};
  const RootSet mus = solve_quadratic(-2.0, 4.0 * z.value());
  std::vector<cplx> out;
  out.reserve(2);
  for (const cplx& mu : mus) {
    if (std::abs(mu) < 1.0 - tol_boundary) continue;
    out.push_back(riemann_map(1.0 / std::conj(mu)));
  }
  return out;
}

/// |dbar sigma| at an interior point, from differentiating
/// sigma(phi(l)) = phi(1/conj l).
inline double sigma_dbar_magnitude(cplx w, double tol_boundary = kDefaultBoundaryTol) {
  const Inversion inv = invert_riemann_map(w, tol_boundary);
  if (inv.location != Location::Interior)
    throw Error(ErrorCode::DomainError, "sigma_dbar_magnitude: point not strictly interior");
  const cplx lambda = inv.inner_root;
  if (std::abs(lambda) == 0.0)
    throw Error(ErrorCode::DomainError, "sigma_dbar_magnitude: pole at w = 0");
  const double denom = std::norm(lambda) * std::abs(riemann_map_derivative(lambda));
  return std::abs(riemann_map_derivative(1.0 / std::conj(lambda))) / denom;
}

}  // namespace schwarz::cardioid
