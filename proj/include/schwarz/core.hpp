#pragma once

// Shared numerics: points of the Riemann sphere, low-degree root solvers and
// circle inversion.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace schwarz {

using cplx = std::complex<double>;

enum class ErrorCode {
  DomainError,
  SlitError,
  TangencyAmbiguous,
  InDroplet,
  NearSingular,
  InadmissibleWord,
  AmbiguousEndpoint,
  BifurcatedRay,
  NotPreperiodic,
  InvalidArgument,
};

inline constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DomainError: return "DOMAIN_ERROR";
    case ErrorCode::SlitError: return "SLIT_ERROR";
    case ErrorCode::TangencyAmbiguous: return "TANGENCY_AMBIGUOUS";
    case ErrorCode::InDroplet: return "IN_DROPLET";
    case ErrorCode::NearSingular: return "NEAR_SINGULAR";
    case ErrorCode::InadmissibleWord: return "INADMISSIBLE_WORD";
    case ErrorCode::AmbiguousEndpoint: return "AMBIGUOUS_ENDPOINT";
    case ErrorCode::BifurcatedRay: return "BIFURCATED_RAY";
    case ErrorCode::NotPreperiodic: return "NOT_PREPERIODIC";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}

/// Error raised by every module; `code()` is stable and printed by the CLI.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A point of the Riemann sphere. Infinity is an explicit state so that
/// critical orbits through the pole stay exact.
class Point {
 public:
  constexpr Point() = default;
  Point(cplx z) : z_(z) {  // NOLINT(google-explicit-constructor)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(ErrorCode::InvalidArgument, "non-finite coordinates");
  }
  Point(double re, double im = 0.0) : Point(cplx(re, im)) {}  // NOLINT

  static constexpr Point infinity() {
    Point p;
    p.infinite_ = true;
    return p;
  }

  bool is_infinite() const noexcept { return infinite_; }
  bool is_finite() const noexcept { return !infinite_; }

  /// Finite value; throws for infinity.
  cplx value() const {
    if (infinite_) throw Error(ErrorCode::DomainError, "point at infinity has no coordinates");
    return z_;
  }

  friend bool operator==(const Point& a, const Point& b) noexcept {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.z_ == b.z_;
  }

  friend std::ostream& operator<<(std::ostream& os, const Point& p) {
    if (p.infinite_) return os << "inf";
    return os << '(' << p.z_.real() << ',' << p.z_.imag() << ')';
  }

 private:
  cplx z_{};
  bool infinite_ = false;
};

/// Chordal distance on the sphere, in [0, 2].
inline double chordal_distance(const Point& a, const Point& b) {
  if (a.is_infinite() && b.is_infinite()) return 0.0;
  if (a.is_infinite() || b.is_infinite()) {
    const cplx z = a.is_infinite() ? b.value() : a.value();
    return 2.0 / std::sqrt(1.0 + std::norm(z));
  }
  const cplx z = a.value(), w = b.value();
  return 2.0 * std::abs(z - w) / std::sqrt((1.0 + std::norm(z)) * (1.0 + std::norm(w)));
}

struct Circle {
  cplx center;
  double radius;

  Circle(cplx c, double r) : center(c), radius(r) {
    if (!(r > 0.0) || !std::isfinite(r))
      throw Error(ErrorCode::InvalidArgument, "circle radius must be positive");
  }
};

/// Inversion z -> c + r^2 / conj(z - c); swaps the center and infinity.
inline Point reflect_in_circle(const Circle& circle, const Point& z) {
  if (z.is_infinite()) return Point(circle.center);
  const cplx d = z.value() - circle.center;
  if (d == cplx(0.0)) return Point::infinity();
  return Point(circle.center + circle.radius * circle.radius / std::conj(d));
}

/// Roots listed with multiplicity (a double root appears twice).
struct RootSet {
  std::vector<cplx> roots;

  std::size_t size() const noexcept { return roots.size(); }
  const cplx& operator[](std::size_t i) const { return roots[i]; }
  auto begin() const { return roots.begin(); }
  auto end() const { return roots.end(); }

  /// Number of listed roots within `tol` of `z`.
  int multiplicity_near(cplx z, double tol) const {
    return static_cast<int>(std::count_if(roots.begin(), roots.end(),
                                          [&](cplx r) { return std::abs(r - z) <= tol; }));
  }
};

namespace detail {

inline double round_to(double x, double quantum) {
  const double r = std::round(x / quantum) * quantum;
  return r == 0.0 ? 0.0 : r;
}

inline void sort_roots(std::vector<cplx>& roots) {
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    const double ar = round_to(a.real(), 1e-12), br = round_to(b.real(), 1e-12);
    if (ar != br) return ar < br;
    return round_to(a.imag(), 1e-12) < round_to(b.imag(), 1e-12);
  });
}

// Horner evaluation of a monic polynomial; coefficients from highest to
// lowest non-leading degree.
template <std::size_t N>
inline cplx eval_monic(const std::array<cplx, N>& c, cplx z, cplx* derivative = nullptr) {
  cplx p = 1.0, dp = 0.0;
  for (const cplx& ck : c) {
    dp = dp * z + p;
    p = p * z + ck;
  }
  if (derivative) *derivative = dp;
  return p;
}

}  // namespace detail

/// Roots of z^2 + b z + c.
inline RootSet solve_quadratic(cplx b, cplx c) {
  const cplx disc = std::sqrt(b * b - 4.0 * c);
  // Pick the sign that avoids cancellation, then recover the other root from
  // the product.
  const cplx q = (std::abs(b + disc) >= std::abs(b - disc)) ? -(b + disc) / 2.0
                                                            : -(b - disc) / 2.0;
  RootSet rs;
  if (q == cplx(0.0)) {
    rs.roots = {0.0, 0.0};
  } else {
    rs.roots = {q, c / q};
  }
  detail::sort_roots(rs.roots);
  return rs;
}

/// Roots of w^3 + a2 w^2 + a1 w + a0 by Cardano, each polished by one
/// guarded Newton step.
inline RootSet solve_cubic_monic(cplx a2, cplx a1, cplx a0) {
  const cplx shift = a2 / 3.0;
  const cplx p = a1 - a2 * a2 / 3.0;
  const cplx q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
  const cplx disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  const cplx s1 = -q / 2.0 + disc, s2 = -q / 2.0 - disc;
  const cplx s = std::abs(s1) >= std::abs(s2) ? s1 : s2;

  static const cplx omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  std::vector<cplx> roots(3);
  if (s == cplx(0.0)) {
    // p = q = 0: triple root.
    roots = {-shift, -shift, -shift};
  } else {
    const cplx u = std::pow(s, 1.0 / 3.0);
    cplx uk = u;
    for (int k = 0; k < 3; ++k) {
      roots[k] = uk - p / (3.0 * uk) - shift;
      uk *= omega;
    }
  }

  const std::array<cplx, 3> coeffs{a2, a1, a0};
  for (cplx& r : roots) {
    cplx d;
    const cplx f = detail::eval_monic(coeffs, r, &d);
    if (d == cplx(0.0)) continue;
    const cplx polished = r - f / d;
    if (std::abs(detail::eval_monic(coeffs, polished)) < std::abs(f)) r = polished;
  }
  RootSet rs{std::move(roots)};
  detail::sort_roots(rs.roots);
  return rs;
}

}  // namespace schwarz
