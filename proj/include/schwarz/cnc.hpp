#pragma once

// The circle-and-cardioid family F_a: Schwarz reflection of the cardioid on
// its closure, reflection in the circumcircle B(a, r_a) outside the disk.
// The droplet T_a is the closed disk minus the open cardioid; its two
// singular boundary points 1/4 and alpha_a are removed to give T_a^0.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include "schwarz/cardioid.hpp"
#include "schwarz/core.hpp"
#include "schwarz/symbolic.hpp"

namespace schwarz::cnc {

inline constexpr double kSlitEnd = -1.0 / 12.0;
inline constexpr double kSlitTol = 1e-9;
inline constexpr double kSingularTol = 1e-10;
inline constexpr double kNearSingularTol = 1e-6;
inline constexpr double kCycleTol = 1e-9;
// Orbits this close to 0 or infinity are snapped onto them so that a
// superattracting cycle through the pole cannot overflow before Brent's
// tortoise catches up.
inline constexpr double kSnapTol = 1e-100;
inline constexpr int kCircumSamples = 2048;
inline constexpr double kTangencyGap = 1e-10;

struct CncMap {
  cplx a;
  double r;
  cplx alpha;
  double tangency_angle;  // theta with phi(e^{i theta}) = alpha
};

namespace detail {

// f(theta) = |phi(e^{i theta}) - a|^2 and its first two derivatives.
struct DistanceSq {
  cplx a;

  void eval(double t, double& f, double& df, double& d2f) const {
    const cplx l = std::polar(1.0, t);
    const cplx z = cardioid::riemann_map(l) - a;
    const cplx dphi = cardioid::riemann_map_derivative(l);
    const cplx z1 = cplx(0.0, 1.0) * l * dphi;
    const cplx z2 = -l * dphi + 0.5 * l * l;
    f = std::norm(z);
    df = 2.0 * (std::conj(z) * z1).real();
    d2f = 2.0 * (std::norm(z1) + (std::conj(z) * z2).real());
  }
  double value(double t) const {
    double f, df, d2f;
    eval(t, f, df, d2f);
    return f;
  }
  double slope(double t) const {
    double f, df, d2f;
    eval(t, f, df, d2f);
    return df;
  }
};

// Root of f' in [lo, hi] with f'(lo) > 0 >= f'(hi): Newton steps kept inside
// the bracket, bisection otherwise. Flat maxima (order-four contact) make
// f'' vanish, where the bisection fallback carries the work.
inline double refine_maximizer(const DistanceSq& f, double lo, double hi) {
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    double v, d1, d2;
    f.eval(t, v, d1, d2);
    if (d1 > 0.0)
      lo = t;
    else
      hi = t;
    double next = 0.5 * (lo + hi);
    if (d2 < -1e-6) {
      const double newton = t - d1 / d2;
      if (newton > lo && newton < hi) next = newton;
    }
    if (next == t) break;
    t = next;
  }
  return t;
}

}  // namespace detail

inline bool on_slit(cplx a) { return std::abs(a.imag()) <= kSlitTol && a.real() < kSlitEnd; }

/// Circumscribing circle of the cardioid centered at a: r_a is the largest
/// distance from a to the boundary, attained at the tangency point alpha_a.
inline CncMap build_cnc(cplx a) {
  if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
    throw Error(ErrorCode::InvalidArgument, "parameter must be finite");
  if (on_slit(a)) throw Error(ErrorCode::SlitError, "parameter lies on the excluded ray (-inf, -1/12)");

  const detail::DistanceSq f{a};
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> slope(kCircumSamples);
  for (int k = 0; k < kCircumSamples; ++k) slope[k] = f.slope(two_pi * k / kCircumSamples);

  struct Candidate {
    double t, value;
  };
  std::vector<Candidate> maxima;
  for (int k = 0; k < kCircumSamples; ++k) {
    const int k1 = (k + 1) % kCircumSamples;
    if (slope[k] > 0.0 && slope[k1] <= 0.0) {
      const double lo = two_pi * k / kCircumSamples;
      const double t = detail::refine_maximizer(f, lo, lo + two_pi / kCircumSamples);
      maxima.push_back({t, f.value(t)});
    }
  }
  if (maxima.empty()) throw Error(ErrorCode::DomainError, "circumcircle: no maximizer found");
  std::sort(maxima.begin(), maxima.end(), [](const Candidate& x, const Candidate& y) { return x.value > y.value; });

  double t = maxima[0].t;
  // Real parameters are symmetric under conjugation, so f' vanishes exactly
  // at theta = pi; snapping avoids the slow flat-maximum bisection at -1/12.
  if (a.imag() == 0.0 && std::abs(t - std::numbers::pi) < 1e-3) t = std::numbers::pi;

  const bool degenerate = std::abs(a - cplx(kSlitEnd, 0.0)) < 1e-6;
  if (maxima.size() > 1 && !degenerate) {
    const double r0 = std::sqrt(maxima[0].value), r1 = std::sqrt(maxima[1].value);
    double gap_t = std::abs(maxima[0].t - maxima[1].t);
    gap_t = std::min(gap_t, two_pi - gap_t);
    if (r0 - r1 <= kTangencyGap && gap_t > 1e-6)
      throw Error(ErrorCode::TangencyAmbiguous, "circumcircle touches the cardioid at two points");
  }
  const cplx alpha = t == std::numbers::pi ? cplx(-0.75, 0.0) : cardioid::riemann_map(std::polar(1.0, t));
  return {a, std::abs(alpha - a), alpha, t};
}

// ---------------------------------------------------------------------------
// The map and its orbit classification.

inline bool near_singular(const CncMap& m, const Point& w, double tol) {
  if (w.is_infinite()) return false;
  const cplx z = w.value();
  return std::abs(z - cardioid::kCusp) <= tol || std::abs(z - m.alpha) <= tol;
}

/// Droplet with the two singular points removed.
inline bool in_fundamental_tile(const CncMap& m, const Point& w) {
  if (w.is_infinite()) return false;
  const cplx z = w.value();
  if (std::abs(z - m.a) > m.r) return false;
  if (near_singular(m, w, kSingularTol)) return false;
  return cardioid::locate(z) != cardioid::Location::Interior;
}

struct Step {
  Point image;
  int symbol;  // 2 for the circle branch; 1 or 3 for the cardioid branch
};

/// One application of F_a with the symbol of the branch used. `previous` is
/// the preceding symbol (0 if none); a cardioid symbol that would repeat it
/// (real lambda, or Im lambda lost to rounding) takes the other value.
inline Step step_F(const CncMap& m, const Point& w, int previous = 0) {
  if (w.is_infinite()) return {Point(m.a), 2};
  const cplx z = w.value();
  const cardioid::Inversion inv = cardioid::invert_riemann_map(z);
  if (inv.location != cardioid::Location::Exterior) {
    int symbol = inv.inner_root.imag() < 0.0 ? 3 : 1;
    if (symbol == previous) symbol = 4 - symbol;
    return {cardioid::schwarz_sigma(z), symbol};
  }
  if (std::abs(z - m.a) >= m.r) return {reflect_in_circle(Circle(m.a, m.r), w), 2};
  throw Error(ErrorCode::InDroplet, "apply_F: point lies in the fundamental tile");
}

inline Point apply_F(const CncMap& m, const Point& w) { return step_F(m, w).image; }

/// |dbar F| at a finite point off the singular set.
inline double dbar_F_magnitude(const CncMap& m, cplx z) {
  if (cardioid::locate(z) == cardioid::Location::Interior) return cardioid::sigma_dbar_magnitude(z);
  const double d = std::abs(z - m.a);
  return m.r * m.r / (d * d);
}

enum class CycleKind { Superattracting, Attracting, Indifferent, Repelling, SingularFixed };

inline constexpr std::string_view to_string(CycleKind k) {
  switch (k) {
    case CycleKind::Superattracting: return "SUPERATTRACTING";
    case CycleKind::Attracting: return "ATTRACTING";
    case CycleKind::Indifferent: return "INDIFFERENT";
    case CycleKind::Repelling: return "REPELLING";
    case CycleKind::SingularFixed: return "SINGULAR_FIXED";
  }
  return "UNKNOWN";
}

inline CycleKind kind_of_multiplier(double mu) {
  if (mu <= 1e-8) return CycleKind::Superattracting;
  if (std::abs(mu - 1.0) <= 1e-6) return CycleKind::Indifferent;
  if (mu < 1.0 - 1e-6) return CycleKind::Attracting;
  return CycleKind::Repelling;
}

/// Product of |dbar F| along the cycle. Cycles through the critical point 0
/// (hence through infinity) have multiplier 0.
inline double multiplier_of_cycle(const CncMap& m, const Point& representative, int period) {
  if (period < 1) throw Error(ErrorCode::InvalidArgument, "period must be >= 1");
  Point w = representative;
  double mu = 1.0;
  bool critical = false;
  for (int k = 0; k < period; ++k) {
    if (near_singular(m, w, kNearSingularTol))
      throw Error(ErrorCode::NearSingular, "cycle passes within 1e-6 of a singular point");
    if (w.is_infinite() || w.value() == cplx(0.0)) {
      critical = true;
    } else {
      mu *= dbar_F_magnitude(m, w.value());
    }
    w = apply_F(m, w);
  }
  return critical ? 0.0 : mu;
}

struct CycleInfo {
  int period = 1;
  Point representative;
  double multiplier_magnitude = 0.0;
  CycleKind kind = CycleKind::Superattracting;
};

enum class VerdictTag { Escaped, NonEscaping, Undetermined };

inline constexpr std::string_view to_string(VerdictTag t) {
  switch (t) {
    case VerdictTag::Escaped: return "ESCAPED";
    case VerdictTag::NonEscaping: return "NON_ESCAPING";
    case VerdictTag::Undetermined: return "UNDETERMINED";
  }
  return "UNKNOWN";
}

struct OrbitVerdict {
  VerdictTag tag = VerdictTag::Undetermined;
  int rank = 0;                     // Escaped: iterate that lands in T_a^0
  symbolic::ItineraryWord word;     // Escaped: one symbol per step
  std::optional<CycleInfo> cycle;   // NonEscaping
  int iterations = 0;               // steps actually taken
};

namespace detail {

inline CycleInfo singular_cycle(const Point& w) {
  return {1, w, 1.0, CycleKind::SingularFixed};
}

inline CycleInfo describe_cycle(const CncMap& m, const Point& rep, int lam) {
  // Brent can report a multiple of the true period while the orbit is still
  // converging; take the smallest return time within tolerance.
  int period = lam;
  Point w = rep;
  for (int j = 1; j < lam; ++j) {
    w = apply_F(m, w);
    if (chordal_distance(w, rep) <= 10.0 * kCycleTol && lam % j == 0) {
      period = j;
      break;
    }
  }
  try {
    const double mu = multiplier_of_cycle(m, rep, period);
    return {period, rep, mu, kind_of_multiplier(mu)};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NearSingular) throw;
    return {period, rep, 1.0, CycleKind::SingularFixed};
  }
}

}  // namespace detail

/// Iterates F_a from z. Escape into T_a^0 ends the orbit; landing on a
/// singular point or closing up a cycle (Brent, spherical tolerance) makes it
/// non-escaping; otherwise the budget runs out.
inline OrbitVerdict classify_orbit(const CncMap& m, const Point& z0, int max_iter,
                                   std::vector<Point>* orbit = nullptr) {
  if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be >= 1");
  std::vector<int> symbols;
  Point z = z0;
  Point tortoise = z0;
  int power = 1, lam = 0;
  OrbitVerdict v;
  if (orbit) orbit->assign(1, z0);
  for (int k = 0;; ++k) {
    v.iterations = k;
    if (near_singular(m, z, kSingularTol)) {
      v.tag = VerdictTag::NonEscaping;
      v.cycle = detail::singular_cycle(z);
      return v;
    }
    if (in_fundamental_tile(m, z)) {
      v.tag = VerdictTag::Escaped;
      v.rank = k;
      v.word = symbolic::ItineraryWord(std::move(symbols));
      return v;
    }
    if (k > 0) {
      ++lam;
      if (chordal_distance(tortoise, z) <= kCycleTol) {
        v.tag = VerdictTag::NonEscaping;
        v.cycle = detail::describe_cycle(m, z, lam);
        return v;
      }
      if (lam == power) {
        tortoise = z;
        power *= 2;
        lam = 0;
      }
    }
    if (k == max_iter) {
      v.tag = VerdictTag::Undetermined;
      return v;
    }
    const Step s = step_F(m, z, symbols.empty() ? 0 : symbols.back());
    symbols.push_back(s.symbol);
    z = s.image;
    if (chordal_distance(z, Point(0.0)) < kSnapTol) z = Point(0.0);
    if (chordal_distance(z, Point::infinity()) < kSnapTol) z = Point::infinity();
    if (orbit) orbit->push_back(z);
  }
}

inline constexpr int kDefaultDepthBudget = 2000;

/// Smallest n >= 1 with F_a^n(inf) in T_a^0, if it happens within budget.
inline std::optional<int> depth(const CncMap& m, int max_iter = kDefaultDepthBudget) {
  const OrbitVerdict v = classify_orbit(m, Point::infinity(), max_iter);
  if (v.tag == VerdictTag::Escaped) return v.rank;
  return std::nullopt;
}

enum class Connectedness { In, Out, Undetermined };

inline constexpr std::string_view to_string(Connectedness c) {
  switch (c) {
    case Connectedness::In: return "IN";
    case Connectedness::Out: return "OUT";
    case Connectedness::Undetermined: return "UNDETERMINED";
  }
  return "UNKNOWN";
}

struct LocusVerdict {
  Connectedness tag;
  int depth = 0;  // Out only

  friend bool operator==(const LocusVerdict&, const LocusVerdict&) = default;
};

/// Membership of a in the connectedness locus, read off the critical orbit
/// 0 -> inf -> a -> ...
inline LocusVerdict in_connectedness_locus(const CncMap& m, int max_iter) {
  const OrbitVerdict v = classify_orbit(m, Point(0.0), max_iter);
  switch (v.tag) {
    case VerdictTag::Escaped: return {Connectedness::Out, v.rank - 1};
    case VerdictTag::NonEscaping: return {Connectedness::In, 0};
    case VerdictTag::Undetermined: break;
  }
  return {Connectedness::Undetermined, 0};
}

/// Every w with F_a(w) = z: the circle-branch preimage when z lies in the
/// closed disk, plus the cardioid-branch preimages.
inline std::vector<Point> preimages_F(const CncMap& m, const Point& z) {
  if (z.is_infinite()) return {Point(0.0)};
  std::vector<Point> out;
  if (std::abs(z.value() - m.a) <= m.r) out.push_back(reflect_in_circle(Circle(m.a, m.r), z));
  for (const cplx& w : cardioid::sigma_preimages(z)) out.emplace_back(w);
  return out;
}

}  // namespace schwarz::cnc
