#pragma once

// Schwarz reflection in the exterior of the deltoid. The exterior is the
// image of |w| > 1 under w + 1/(2 w^2); the reflection is conjugate to
// w -> 1/conj(w) through that map.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>

#include "schwarz/core.hpp"

namespace schwarz::deltoid {

inline constexpr double kRootTol = 1e-9;
inline constexpr double kCuspTol = 1e-9;
inline constexpr double kDefaultEscapeRadius = 4.0;

inline const std::array<cplx, 3>& cusps() {
  static const std::array<cplx, 3> c{
      cplx(1.5, 0.0),
      1.5 * std::polar(1.0, 2.0 * std::numbers::pi / 3.0),
      1.5 * std::polar(1.0, -2.0 * std::numbers::pi / 3.0),
  };
  return c;
}

enum class LocationTag { Droplet, Exterior, Cusp };

struct Location {
  LocationTag tag;
  std::optional<cplx> outer_root;  // present iff Exterior
};

inline cplx deltoid_map(cplx w) {
  if (w == cplx(0.0)) throw Error(ErrorCode::DomainError, "deltoid_map: pole at w = 0");
  return w + 1.0 / (2.0 * w * w);
}

inline Location locate_deltoid(cplx z) {
  for (const cplx& c : cusps())
    if (std::abs(z - c) <= kCuspTol) return {LocationTag::Cusp, std::nullopt};

  // w^3 - z w^2 + 1/2 = 0; univalence leaves at most one root outside the
  // closed disk.
  const RootSet roots = solve_cubic_monic(-z, 0.0, 0.5);
  std::optional<cplx> outer;
  double best = 1.0 + kRootTol;
  for (const cplx& w : roots) {
    if (std::abs(w) > best) {
      best = std::abs(w);
      outer = w;
    }
  }
  if (!outer) return {LocationTag::Droplet, std::nullopt};
  return {LocationTag::Exterior, outer};
}

inline Point schwarz_deltoid(cplx z) {
  const Location loc = locate_deltoid(z);
  if (loc.tag != LocationTag::Exterior)
    throw Error(ErrorCode::DomainError, "schwarz_deltoid: point not in the exterior domain");
  return Point(deltoid_map(1.0 / std::conj(*loc.outer_root)));
}

enum class VerdictTag { Tiling, BasinInfinity, Undetermined };

struct Verdict {
  VerdictTag tag;
  int iterations;  // tile rank for Tiling, first exit iterate for BasinInfinity

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// Iterates the reflection until the orbit lands in the droplet, leaves the
/// escape disk, or the budget runs out. Cusps are fixed points on the limit
/// set and report Undetermined.
inline Verdict classify_deltoid_orbit(cplx z, int max_iter,
                                      double escape_radius = kDefaultEscapeRadius) {
  if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be >= 1");
  if (escape_radius < 4.0) throw Error(ErrorCode::InvalidArgument, "escape_radius must be >= 4");
  for (int k = 0;; ++k) {
    if (std::abs(z) > escape_radius) return {VerdictTag::BasinInfinity, k};
    const Location loc = locate_deltoid(z);
    if (loc.tag == LocationTag::Droplet) return {VerdictTag::Tiling, k};
    if (loc.tag == LocationTag::Cusp || k == max_iter) return {VerdictTag::Undetermined, k};
    z = deltoid_map(1.0 / std::conj(*loc.outer_root));
  }
}

}  // namespace schwarz::deltoid
