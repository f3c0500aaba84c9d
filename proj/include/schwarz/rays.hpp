#pragma once

// Dynamical rays of F_a at rational angles. The ray is pulled back from a
// base point in the fundamental tile along the inverse branches named by the
// angle's itinerary: 2 is the circle reflection, 1 and 3 are the cardioid
// preimages on the upper and lower halves (sign of Im lambda).

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "schwarz/cardioid.hpp"
#include "schwarz/cnc.hpp"
#include "schwarz/core.hpp"
#include "schwarz/symbolic.hpp"

namespace schwarz::rays {

inline constexpr int kDefaultDepth = 60;
inline constexpr double kDefaultLandTol = 1e-10;
inline constexpr long kDefaultMaxBlocks = 1L << 20;
inline constexpr double kBranchTol = 1e-14;
inline constexpr double kFarAway = 1e12;

struct RayApprox {
  symbolic::RationalAngle angle;
  symbolic::EventuallyPeriodicWord word;
  // points[n] = G_pre(H^n(base)) where H pulls back once along the period
  // block, so F^{|pre|+p}(points[n+1]) = F^{|pre|}(points[n]).
  std::vector<cplx> points;
  std::optional<cplx> landing;
  bool converged = false;
  double landing_error = 0.0;  // last change of the landing estimate
  long blocks_used = 0;
};

/// A point strictly inside T_a^0: halfway between the far end of the
/// diameter through alpha_a and the first cardioid point met on the way
/// back toward alpha_a.
inline cplx base_point(const cnc::CncMap& m) {
  const cplx dir = (m.a - m.alpha) / std::abs(m.a - m.alpha);
  const cplx far = m.a + m.r * dir;
  auto inside = [](cplx z) { return cardioid::locate(z) != cardioid::Location::Exterior; };
  constexpr int kSteps = 4096;
  double hit = 1.0;  // parameter along far -> alpha
  for (int k = 1; k <= kSteps; ++k) {
    const double t = static_cast<double>(k) / kSteps;
    if (inside(far + t * (m.alpha - far))) {
      double lo = static_cast<double>(k - 1) / kSteps, hi = t;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (inside(far + mid * (m.alpha - far)) ? hi : lo) = mid;
      }
      hit = hi;
      break;
    }
  }
  return far + 0.5 * hit * (m.alpha - far);
}

/// Inverse branch G_symbol of F_a.
inline cplx inverse_branch(const cnc::CncMap& m, cplx z, int symbol) {
  if (std::abs(z) > kFarAway) throw Error(ErrorCode::BifurcatedRay, "ray passes through the critical value");
  if (symbol == 2) {
    if (std::abs(z - m.a) > m.r) throw Error(ErrorCode::BifurcatedRay, "circle branch undefined outside the disk");
    const Point w = reflect_in_circle(Circle(m.a, m.r), Point(z));
    if (w.is_infinite()) throw Error(ErrorCode::BifurcatedRay, "ray passes through the critical value");
    return w.value();
  }
  // phi(mu) = z; the preimage is phi(1/conj mu) and its lambda has the sign
  // of Im mu.
  const RootSet mus = solve_quadratic(-2.0, 4.0 * z);
  const double want = symbol == 1 ? 1.0 : -1.0;
  for (const cplx& mu : mus) {
    if (std::abs(mu) < 1.0 - cardioid::kDefaultBoundaryTol) continue;
    if (mu.imag() * want > kBranchTol * std::abs(mu)) return cardioid::riemann_map(1.0 / std::conj(mu));
  }
  throw Error(ErrorCode::BifurcatedRay, "no cardioid preimage on the required side");
}

inline cplx pull_back(const cnc::CncMap& m, cplx z, const symbolic::ItineraryWord& word) {
  for (std::size_t i = word.size(); i-- > 0;) z = inverse_branch(m, z, word[i]);
  return z;
}

/// Traces the ray at angle theta (itinerary under theta -> -2 theta) for
/// `depth` period blocks, then keeps doubling the block count and
/// extrapolating until the landing estimate settles within land_tol or
/// max_blocks is reached. The Aitken step on block counts n, 2n, 4n removes
/// the leading 1/n term of parabolic landing as well as geometric tails.
inline RayApprox trace_ray(const cnc::CncMap& m, const symbolic::RationalAngle& theta, int depth = kDefaultDepth,
                           double land_tol = kDefaultLandTol, long max_blocks = kDefaultMaxBlocks,
                           symbolic::Side side = symbolic::Side::CounterClockwise) {
  if (depth < 1) throw Error(ErrorCode::InvalidArgument, "depth must be >= 1");
  RayApprox ray;
  ray.angle = theta;
  ray.word = symbolic::itinerary_of_angle(theta, side).word;
  const auto& pre = ray.word.preperiod;
  const auto& per = ray.word.period;

  cplx y = base_point(m);
  ray.points.reserve(static_cast<std::size_t>(depth) + 1);
  ray.points.push_back(pull_back(m, y, pre));
  for (int n = 1; n <= depth; ++n) {
    y = pull_back(m, y, per);
    ray.points.push_back(pull_back(m, y, pre));
  }
  ray.blocks_used = depth;
  const std::size_t last = ray.points.size() - 1;
  if (std::abs(ray.points[last] - ray.points[last - 1]) <= land_tol) {
    ray.landing = ray.points[last];
    ray.landing_error = std::abs(ray.points[last] - ray.points[last - 1]);
    ray.converged = true;
    return ray;
  }

  // Tail values y_n at n = depth * 2^k.
  std::vector<cplx> tail{y};
  long n = depth;
  std::optional<cplx> previous;
  while (2 * n <= max_blocks) {
    for (long k = 0; k < n; ++k) y = pull_back(m, y, per);
    n *= 2;
    tail.push_back(y);
    ray.blocks_used = n;
    if (tail.size() < 3) continue;
    const cplx y0 = tail[tail.size() - 3], y1 = tail[tail.size() - 2], y2 = tail.back();
    const cplx d1 = y1 - y0, d2 = y2 - y1;
    cplx estimate = y2;
    if (std::abs(d2) <= land_tol) {
      estimate = y2;
    } else if (std::abs(d1) > 0.0) {
      const cplx q = d2 / d1;
      if (std::abs(1.0 - q) > 1e-3) estimate = y2 + d2 * q / (1.0 - q);
    }
    const cplx landed = pull_back(m, estimate, pre);
    if (previous) {
      ray.landing_error = std::abs(landed - *previous);
      if (ray.landing_error <= land_tol || std::abs(d2) <= land_tol) {
        ray.landing = landed;
        ray.converged = true;
        return ray;
      }
    }
    previous = landed;
  }
  ray.landing = previous;
  return ray;
}

/// Group-side counterpart: the orbit 0, rho_{i1}(0), rho_{i1} rho_{i2}(0), ...
inline std::vector<cplx> g_ray(const symbolic::EventuallyPeriodicWord& word, int depth) {
  return symbolic::g_ray(word, depth);
}

}  // namespace schwarz::rays
