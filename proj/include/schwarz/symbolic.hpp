#pragma once

// Ideal triangle group side of the picture: the piecewise reflection map rho
// of the unit disk, its tiles and words, the anti-doubling map on angles, the
// circle conjugacy between them, and Minkowski's question-mark function.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "schwarz/core.hpp"

namespace schwarz::symbolic {

// ---------------------------------------------------------------------------
// Rational angles in Q/Z.

class RationalAngle {
 public:
  RationalAngle() = default;
  RationalAngle(std::int64_t num, std::int64_t den) {
    if (den <= 0) throw Error(ErrorCode::InvalidArgument, "angle denominator must be positive");
    num %= den;
    if (num < 0) num += den;
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  /// Parses "P/Q" (or a bare integer).
  static RationalAngle parse(std::string_view text) {
    const auto slash = text.find('/');
    auto to_int = [&](std::string_view s) {
      std::int64_t v = 0;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw Error(ErrorCode::InvalidArgument, "malformed rational '" + std::string(text) + "'");
      return v;
    };
    if (slash == std::string_view::npos) return {to_int(text), 1};
    return {to_int(text.substr(0, slash)), to_int(text.substr(slash + 1))};
  }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// theta -> -2 theta (mod 1).
  RationalAngle anti_doubled() const {
    const auto twice = static_cast<std::int64_t>((static_cast<__int128>(2) * num_) % den_);
    return {(den_ - twice) % den_, den_};
  }

  /// Index in {0, 1, 2} if this is one of the partition points 0, 1/3, 2/3.
  std::optional<int> partition_point() const {
    const __int128 three_num = static_cast<__int128>(3) * num_;
    if (three_num % den_ != 0) return std::nullopt;
    return static_cast<int>(three_num / den_);
  }

  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  friend bool operator==(const RationalAngle&, const RationalAngle&) = default;
  friend std::ostream& operator<<(std::ostream& os, const RationalAngle& a) { return os << a.str(); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// ---------------------------------------------------------------------------
// Words over {1, 2, 3} with no symbol repeated consecutively.

class ItineraryWord {
 public:
  ItineraryWord() = default;
  ItineraryWord(std::vector<int> symbols) : symbols_(std::move(symbols)) {  // NOLINT
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (symbols_[i] < 1 || symbols_[i] > 3)
        throw Error(ErrorCode::InadmissibleWord, "symbol outside {1,2,3}");
      if (i > 0 && symbols_[i] == symbols_[i - 1])
        throw Error(ErrorCode::InadmissibleWord, "repeated consecutive symbol");
    }
  }
  ItineraryWord(std::initializer_list<int> symbols) : ItineraryWord(std::vector<int>(symbols)) {}

  const std::vector<int>& symbols() const noexcept { return symbols_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  int operator[](std::size_t i) const { return symbols_[i]; }
  int back() const { return symbols_.back(); }

  std::string str() const {
    std::string s;
    for (int v : symbols_) s.push_back(static_cast<char>('0' + v));
    return s;
  }

  friend bool operator==(const ItineraryWord&, const ItineraryWord&) = default;
  friend std::ostream& operator<<(std::ostream& os, const ItineraryWord& w) { return os << '(' << w.str() << ')'; }

 private:
  std::vector<int> symbols_;
};

/// preperiod followed by the period block repeated forever.
struct EventuallyPeriodicWord {
  ItineraryWord preperiod;
  ItineraryWord period;

  EventuallyPeriodicWord() = default;
  EventuallyPeriodicWord(ItineraryWord pre, ItineraryWord per)
      : preperiod(std::move(pre)), period(std::move(per)) {
    if (period.empty()) {
      return;
    }
    if (period.size() == 1 || period[0] == period.back())
      throw Error(ErrorCode::InadmissibleWord, "period block is not cyclically admissible");
    if (!preperiod.empty() && preperiod.back() == period[0])
      throw Error(ErrorCode::InadmissibleWord, "preperiod does not join the period block");
  }

  /// First n symbols of the infinite word (or of the finite preperiod when
  /// there is no period).
  std::vector<int> expand(std::size_t n) const {
    std::vector<int> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (i < preperiod.size()) {
        out.push_back(preperiod[i]);
      } else if (!period.empty()) {
        out.push_back(period[(i - preperiod.size()) % period.size()]);
      } else {
        break;
      }
    }
    return out;
  }

  friend bool operator==(const EventuallyPeriodicWord&, const EventuallyPeriodicWord&) = default;
};

/// All admissible words of length n, in lexicographic order.
inline std::vector<ItineraryWord> admissible_words(int n) {
  std::vector<std::vector<int>> words{{}};
  for (int len = 0; len < n; ++len) {
    std::vector<std::vector<int>> next;
    next.reserve(words.size() * 3);
    for (const auto& w : words)
      for (int s = 1; s <= 3; ++s)
        if (w.empty() || w.back() != s) {
          auto v = w;
          v.push_back(s);
          next.push_back(std::move(v));
        }
    words = std::move(next);
  }
  std::vector<ItineraryWord> out;
  out.reserve(words.size());
  for (auto& w : words) out.emplace_back(std::move(w));
  return out;
}

// ---------------------------------------------------------------------------
// Geometry of the ideal triangle.

inline constexpr double kSqrt3 = std::numbers::sqrt3;

/// Circle C_k (k = 1, 2, 3), centered at 2 e^{i pi (2k-1)/3} with radius sqrt 3.
inline Circle side_circle(int k) {
  if (k < 1 || k > 3) throw Error(ErrorCode::InvalidArgument, "side index must be 1, 2 or 3");
  static const std::array<cplx, 3> centers{cplx(1.0, kSqrt3), cplx(-2.0, 0.0), cplx(1.0, -kSqrt3)};
  return Circle(centers[k - 1], kSqrt3);
}

/// Ideal vertices 1, e^{2 pi i/3}, e^{4 pi i/3}; vertex j sits at angle j/3.
inline cplx ideal_vertex(int j) {
  if (j == 0) return {1.0, 0.0};
  return std::polar(1.0, 2.0 * std::numbers::pi * j / 3.0);
}

/// 1, 2, 3 for the regions D_k beyond side k (side arcs included), 0 for the
/// interior of the fundamental triangle.
inline int region_of(cplx z) {
  constexpr double tol = 1e-12;
  for (int k = 1; k <= 3; ++k) {
    const Circle c = side_circle(k);
    if (std::abs(z - c.center) <= c.radius * (1.0 + tol)) return k;
  }
  return 0;
}

/// Piecewise reflection on the closed disk minus the open fundamental
/// triangle.
inline cplx rho(cplx z) {
  if (std::abs(z) > 1.0 + 1e-9) throw Error(ErrorCode::DomainError, "rho: point outside the closed unit disk");
  const int k = region_of(z);
  if (k == 0) throw Error(ErrorCode::DomainError, "rho: point inside the fundamental triangle");
  return reflect_in_circle(side_circle(k), Point(z)).value();
}

/// Composition of side reflections, stored as a Mobius matrix acting on z or
/// on conj(z).
class AntiMobius {
 public:
  static AntiMobius identity() { return {}; }

  /// this o rho_k
  AntiMobius then_reflect(int k) const {
    const Circle c = side_circle(k);
    const double s = c.radius * c.radius - std::norm(c.center);
    // rho_k(z) = (c u + s) / (u - conj c) with u = conj z.
    std::array<cplx, 4> mk{c.center, s, 1.0, -std::conj(c.center)};
    if (conj_) {
      for (auto& e : mk) e = std::conj(e);
    }
    AntiMobius out;
    out.m_ = {m_[0] * mk[0] + m_[1] * mk[2], m_[0] * mk[1] + m_[1] * mk[3],
              m_[2] * mk[0] + m_[3] * mk[2], m_[2] * mk[1] + m_[3] * mk[3]};
    out.conj_ = !conj_;
    double scale = 0.0;
    for (const auto& e : out.m_) scale = std::max(scale, std::abs(e));
    for (auto& e : out.m_) e /= scale;
    return out;
  }

  static AntiMobius from_word(const std::vector<int>& word) {
    AntiMobius m;
    for (int s : word) m = m.then_reflect(s);
    return m;
  }

  cplx operator()(cplx z) const {
    const cplx u = conj_ ? std::conj(z) : z;
    return (m_[0] * u + m_[1]) / (m_[2] * u + m_[3]);
  }

 private:
  std::array<cplx, 4> m_{1.0, 0.0, 0.0, 1.0};
  bool conj_ = false;
};

/// Boundary of the fundamental triangle: `per_side` samples on each side arc,
/// starting at vertex 1 and running counterclockwise.
inline std::vector<cplx> fundamental_triangle_boundary(int per_side) {
  if (per_side < 1) throw Error(ErrorCode::InvalidArgument, "resolution must be >= 1");
  std::vector<cplx> pts;
  pts.reserve(static_cast<std::size_t>(3 * per_side));
  for (int k = 1; k <= 3; ++k) {
    // Side k joins vertex k-1 to vertex k (mod 3).
    const Circle c = side_circle(k);
    const double t0 = std::arg(ideal_vertex(k - 1) - c.center);
    double t1 = std::arg(ideal_vertex(k % 3) - c.center);
    // The side is the 60 degree arc facing the origin.
    while (t1 - t0 > std::numbers::pi) t1 -= 2.0 * std::numbers::pi;
    while (t0 - t1 > std::numbers::pi) t1 += 2.0 * std::numbers::pi;
    for (int i = 0; i < per_side; ++i) {
      const double t = t0 + (t1 - t0) * i / per_side;
      pts.push_back(c.center + std::polar(c.radius, t));
    }
  }
  return pts;
}

/// Polygonal approximation of the tile rho_{i1} o ... o rho_{ik}(Pi).
inline std::vector<cplx> tile(const ItineraryWord& word, int resolution) {
  const AntiMobius m = AntiMobius::from_word(word.symbols());
  std::vector<cplx> pts = fundamental_triangle_boundary(resolution);
  for (cplx& p : pts) p = m(p);
  return pts;
}

/// Vertices 0, rho_{i1}(0), rho_{i1} rho_{i2}(0), ... of the group ray for the
/// word, with the period block repeated `depth` times.
inline std::vector<cplx> g_ray(const EventuallyPeriodicWord& word, int depth) {
  const std::size_t n = word.preperiod.size() + static_cast<std::size_t>(std::max(depth, 0)) * word.period.size();
  const std::vector<int> symbols = word.expand(n);
  std::vector<cplx> out{cplx(0.0)};
  out.reserve(symbols.size() + 1);
  AntiMobius m;
  for (int s : symbols) {
    m = m.then_reflect(s);
    out.push_back(m(0.0));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Itineraries of rational angles under theta -> -2 theta.

enum class Side { CounterClockwise, Clockwise };

inline Side flipped(Side s) { return s == Side::CounterClockwise ? Side::Clockwise : Side::CounterClockwise; }

/// Symbol of a partition point j/3 seen from the given side.
inline int endpoint_symbol(int j, Side side) {
  // Counterclockwise of j/3 lies in I_{j+1}; clockwise lies in I_j (I_3 for 0).
  return side == Side::CounterClockwise ? j + 1 : (j == 0 ? 3 : j);
}

inline int symbol_of_angle(const RationalAngle& theta) {
  const __int128 three_num = static_cast<__int128>(3) * theta.num();
  if (three_num < theta.den()) return 1;
  if (three_num < 2 * static_cast<__int128>(theta.den())) return 2;
  return 3;
}

struct AngleItinerary {
  EventuallyPeriodicWord word;
  /// Step at which the orbit lands on a partition point, and which one (j/3).
  std::optional<std::size_t> endpoint_step;
  int endpoint_index = 0;
};

inline constexpr std::size_t kMaxOrbitLength = std::size_t{1} << 22;

/// Symbols i_n with m_{-2}^{n-1}(theta) in I_{i_n}. Orbits through a partition
/// point need a side; nullopt makes them an error.
inline AngleItinerary itinerary_of_angle(const RationalAngle& theta,
                                         std::optional<Side> side = Side::CounterClockwise) {
  std::vector<int> symbols;
  std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> seen;
  RationalAngle x = theta;
  Side s = side.value_or(Side::CounterClockwise);
  AngleItinerary result;
  for (std::size_t step = 0;; ++step) {
    if (step > kMaxOrbitLength)
      throw Error(ErrorCode::NotPreperiodic, "orbit of " + theta.str() + " too long to resolve");
    if (const auto j = x.partition_point()) {
      if (!side)
        throw Error(ErrorCode::AmbiguousEndpoint,
                    "orbit of " + theta.str() + " meets a partition point; a side is required");
      // Partition points are fixed and the side alternates: period two.
      std::vector<int> pre(symbols.begin(), symbols.end());
      std::vector<int> per{endpoint_symbol(*j, s), endpoint_symbol(*j, flipped(s))};
      result.endpoint_step = step;
      result.endpoint_index = *j;
      // Fold a trailing preperiod symbol into the cycle when it matches.
      while (!pre.empty() && pre.back() == per.back()) {
        std::rotate(per.rbegin(), per.rbegin() + 1, per.rend());
        pre.pop_back();
      }
      result.word = EventuallyPeriodicWord(ItineraryWord(std::move(pre)), ItineraryWord(std::move(per)));
      return result;
    }
    if (const auto it = seen.find({x.num(), x.den()}); it != seen.end()) {
      std::vector<int> pre(symbols.begin(), symbols.begin() + static_cast<std::ptrdiff_t>(it->second));
      std::vector<int> per(symbols.begin() + static_cast<std::ptrdiff_t>(it->second), symbols.end());
      result.word = EventuallyPeriodicWord(ItineraryWord(std::move(pre)), ItineraryWord(std::move(per)));
      return result;
    }
    seen.emplace(std::pair{x.num(), x.den()}, step);
    symbols.push_back(symbol_of_angle(x));
    x = x.anti_doubled();
    s = flipped(s);
  }
}

/// Preimage of theta under m_{-2} lying in the closed arc I_symbol.
inline RationalAngle anti_doubling_preimage(const RationalAngle& theta, int symbol) {
  const std::int64_t den = theta.den();
  for (std::int64_t k : {1, 2}) {
    // (k - theta) / 2 = (k den - num) / (2 den)
    const __int128 num = static_cast<__int128>(k) * den - theta.num();
    const __int128 den2 = static_cast<__int128>(2) * den;
    // Membership in [(s-1)/3, s/3], with 1 standing in for 0 on I_3.
    const bool in = 3 * num >= (symbol - 1) * den2 && 3 * num <= symbol * den2;
    if (in) {
      const __int128 g = std::gcd(static_cast<std::int64_t>(num % den2 == 0 ? den2 : num), static_cast<std::int64_t>(den2));
      return {static_cast<std::int64_t>(num / g), static_cast<std::int64_t>(den2 / g)};
    }
  }
  throw Error(ErrorCode::DomainError, "no anti-doubling preimage in the requested arc");
}

// ---------------------------------------------------------------------------
// The circle conjugacy between rho and m_{-2}.

/// Angle in turns of a unit complex number, in [0, 1).
inline double turns_of(cplx z) {
  double t = std::arg(z) / (2.0 * std::numbers::pi);
  if (t < 0.0) t += 1.0;
  if (t >= 1.0) t -= 1.0;
  return t;
}

inline double circular_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), 1.0);
  return std::min(d, 1.0 - d);
}

struct ConjugacyValue {
  double angle = 0.0;        // in [0, 1)
  double error_bound = 0.0;  // width of the coding interval containing the true value
  std::optional<RationalAngle> exact;
  std::vector<int> symbols;
};

namespace detail {

inline constexpr double kCuspTol = 1e-12;

inline std::optional<int> near_partition_point(double t) {
  for (int j = 0; j <= 3; ++j)
    if (std::abs(t - j / 3.0) <= kCuspTol) return j % 3;
  return std::nullopt;
}

inline int symbol_of_turns(double t) {
  if (t < 1.0 / 3.0) return 1;
  if (t < 2.0 / 3.0) return 2;
  return 3;
}

// Nested interval of angles whose m_{-2} itinerary begins with `symbols`.
inline std::pair<double, double> coding_interval(const std::vector<int>& symbols) {
  const int last = symbols.back();
  double lo = (last - 1) / 3.0, hi = last / 3.0;
  for (std::size_t i = symbols.size() - 1; i-- > 0;) {
    const int s = symbols[i];
    const double mid = 0.5 * (lo + hi);
    const double m = mid - std::floor(mid);
    double c = 0.0;
    bool found = false;
    for (double k : {1.0, 2.0}) {
      double cand = (k - m) / 2.0;
      cand -= std::floor(cand);
      if (cand >= (s - 1) / 3.0 - 1e-15 && cand <= s / 3.0 + 1e-15) {
        c = cand;
        found = true;
        break;
      }
    }
    if (!found) throw Error(ErrorCode::DomainError, "coding interval: inadmissible symbol sequence");
    // m_{-2} reverses orientation.
    const double new_lo = c - (hi - mid) / 2.0;
    const double new_hi = c + (mid - lo) / 2.0;
    lo = new_lo;
    hi = new_hi;
  }
  return {lo, hi};
}

}  // namespace detail

/// E(zeta) to `depth` symbols: the rho-itinerary of zeta is transported to the
/// m_{-2} coding interval with the same symbols. Points whose orbit lands on
/// an ideal vertex get their exact rational value as well.
inline ConjugacyValue conjugacy_E(cplx zeta, int depth, Side side = Side::CounterClockwise) {
  if (depth < 1) throw Error(ErrorCode::InvalidArgument, "depth must be >= 1");
  if (std::abs(std::abs(zeta) - 1.0) > 1e-9)
    throw Error(ErrorCode::DomainError, "conjugacy_E: point not on the unit circle");
  ConjugacyValue out;
  out.symbols.reserve(static_cast<std::size_t>(depth));
  double t = turns_of(zeta);
  Side s = side;
  std::optional<int> vertex;
  std::size_t vertex_step = 0;
  for (int n = 0; n < depth; ++n) {
    if (!vertex) {
      if (const auto j = detail::near_partition_point(t)) {
        vertex = *j;
        vertex_step = static_cast<std::size_t>(n);
      }
    }
    if (vertex) {
      out.symbols.push_back(endpoint_symbol(*vertex, s));
    } else {
      const int k = detail::symbol_of_turns(t);
      out.symbols.push_back(k);
      t = turns_of(reflect_in_circle(side_circle(k), Point(std::polar(1.0, 2.0 * std::numbers::pi * t))).value());
    }
    s = flipped(s);
  }
  const auto [lo, hi] = detail::coding_interval(out.symbols);
  out.error_bound = hi - lo;
  out.angle = 0.5 * (lo + hi);
  if (vertex) {
    RationalAngle exact(*vertex, 3);
    for (std::size_t i = vertex_step; i-- > 0;) exact = anti_doubling_preimage(exact, out.symbols[i]);
    out.exact = exact;
    out.angle = exact.to_double();
  }
  out.angle -= std::floor(out.angle);
  return out;
}

struct InverseConjugacyValue {
  cplx point;
  double error_bound = 0.0;  // arc length (turns) of the coding arc
  bool exact = false;
};

/// E^{-1}(theta): nested intersection of rho-preimage arcs with the symbols of
/// theta under m_{-2}.
inline InverseConjugacyValue conjugacy_E_inverse(const RationalAngle& theta, int depth,
                                                 Side side = Side::CounterClockwise) {
  if (depth < 1) throw Error(ErrorCode::InvalidArgument, "depth must be >= 1");
  const AngleItinerary it = itinerary_of_angle(theta, side);
  InverseConjugacyValue out;
  if (it.endpoint_step && *it.endpoint_step < static_cast<std::size_t>(depth)) {
    const std::vector<int> prefix = it.word.expand(*it.endpoint_step);
    out.point = AntiMobius::from_word(prefix)(ideal_vertex(it.endpoint_index));
    out.exact = true;
    out.point /= std::abs(out.point);
    return out;
  }
  std::vector<int> symbols = it.word.expand(static_cast<std::size_t>(depth));
  const int last = symbols.back();
  symbols.pop_back();
  const AntiMobius m = AntiMobius::from_word(symbols);
  // Arc I_last runs between vertices last-1 and last; map ends and midpoint.
  const cplx a = m(ideal_vertex(last - 1));
  const cplx b = m(ideal_vertex(last % 3));
  const cplx c = m(std::polar(1.0, 2.0 * std::numbers::pi * (2 * last - 1) / 6.0));
  const double ta = turns_of(a), tb = turns_of(b), tc = turns_of(c);
  // Arc from ta to tb (either orientation) that passes through tc.
  auto ccw = [](double from, double to) { double d = to - from; return d - std::floor(d); };
  double start = ta, len = ccw(ta, tb);
  if (ccw(ta, tc) > len) {
    start = tb;
    len = ccw(tb, ta);
  }
  out.point = std::polar(1.0, 2.0 * std::numbers::pi * (start + len / 2.0));
  out.error_bound = len;
  return out;
}

// ---------------------------------------------------------------------------
// Minkowski question-mark function, exactly.

using BigInt = boost::multiprecision::cpp_int;

/// numerator / 2^exponent in lowest terms.
struct Dyadic {
  BigInt numerator = 0;
  unsigned exponent = 0;

  static Dyadic make(BigInt num, unsigned exp) {
    while (exp > 0 && (num & 1) == 0) {
      num >>= 1;
      --exp;
    }
    return {std::move(num), exp};
  }

  BigInt denominator() const { return BigInt(1) << exponent; }

  std::string str() const {
    return numerator.str() + "/" + denominator().str();
  }

  double to_double() const {
    return static_cast<double>(numerator) / std::ldexp(1.0, static_cast<int>(exponent));
  }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exponent == b.exponent && a.numerator == b.numerator;
  }
  friend bool operator<(const Dyadic& a, const Dyadic& b) {
    const unsigned e = std::max(a.exponent, b.exponent);
    return (a.numerator << (e - a.exponent)) < (b.numerator << (e - b.exponent));
  }
};

/// ?(p/q) for 0 <= p/q <= 1 by descending the Stern-Brocot tree: every step
/// replaces one endpoint by the mediant and its value by the midpoint.
/// Runs of same-direction steps are taken in one go.
inline Dyadic question_mark(std::int64_t p, std::int64_t q) {
  if (q <= 0 || p < 0 || p > q) throw Error(ErrorCode::InvalidArgument, "question_mark needs 0 <= p/q <= 1");
  const std::int64_t g = std::gcd(p, q);
  p /= g;
  q /= g;
  if (p == 0) return {0, 0};
  if (p == q) return {1, 0};

  // Current Farey interval [ln/ld, rn/rd] and the values at its ends, as
  // numerators over 2^exp.
  BigInt ln = 0, ld = 1, rn = 1, rd = 1;
  BigInt lv = 0, rv = 1;
  unsigned exp = 0;
  const BigInt P = p, Q = q;
  for (;;) {
    const BigInt mn = ln + rn, md = ld + rd;
    const BigInt lhs = P * md, rhs = mn * Q;  // compare p/q with the mediant
    if (lhs == rhs) {
      return Dyadic::make(lv + rv, exp + 1);
    }
    if (lhs < rhs) {
      // Target left of the mediant: k consecutive left moves, with k maximal
      // such that p/q < (ln*k + rn)/(ld*k + rd) still holds before the last.
      // p (ld k + rd) < q (ln k + rn)  <=>  k (p ld - q ln) < q rn - p rd.
      const BigInt a = P * ld - Q * ln;  // > 0
      const BigInt b = Q * rn - P * rd;  // > 0
      BigInt k = b / a;
      if (k * a == b) k -= 1;  // stop on the step that hits the target
      if (k < 1) k = 1;
      const unsigned kk = static_cast<unsigned>(k);
      rn = ln * k + rn;
      rd = ld * k + rd;
      // rv <- lv + (rv - lv) / 2^k
      lv <<= kk;
      rv = lv + (rv - (lv >> kk));
      exp += kk;
    } else {
      const BigInt a = Q * rn - P * rd;  // > 0
      const BigInt b = P * ld - Q * ln;  // > 0
      BigInt k = b / a;
      if (k * a == b) k -= 1;
      if (k < 1) k = 1;
      const unsigned kk = static_cast<unsigned>(k);
      ln = rn * k + ln;
      ld = rd * k + ld;
      // lv <- rv - (rv - lv) / 2^k
      rv <<= kk;
      lv = rv - ((rv >> kk) - lv);
      exp += kk;
    }
  }
}

}  // namespace schwarz::symbolic
