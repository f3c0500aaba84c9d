#include <gtest/gtest.h>

#include <random>

#include "schwarz/cardioid.hpp"

using namespace schwarz;
using namespace schwarz::cardioid;

namespace {

// Closed form of sigma on the principal branch, written out independently of
// the lambda-coordinate implementation.
cplx sigma_closed_form(cplx w) {
  const cplx s = std::sqrt(1.0 - 4.0 * std::conj(w));
  return (1.0 - 2.0 * s) / (4.0 * (1.0 - s) * (1.0 - s));
}

// sigma is anti-holomorphic, so a real-direction central difference gives
// |dbar sigma|.
double dbar_fd(cplx w, double h = 1e-6) {
  return std::abs((schwarz_sigma(w + h).value() - schwarz_sigma(w - h).value()) / (2.0 * h));
}

cplx random_in_disk(std::mt19937_64& rng, cplx center, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return center + std::polar(radius * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
}

}  // namespace

TEST(RiemannMap, SpecExamples) {
  EXPECT_EQ(riemann_map(1.0), cplx(0.25));
  EXPECT_EQ(riemann_map(-1.0), cplx(-0.75));
  EXPECT_EQ(riemann_map(0.0), cplx(0.0));
}

TEST(RiemannMap, SymmetricUnderLambdaToTwoMinusLambda) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < 10000; ++t) {
    const cplx l(u(rng), u(rng));
    EXPECT_LE(std::abs(riemann_map(l) - riemann_map(2.0 - l)), 1e-12 * (1.0 + std::norm(l)));
  }
}

TEST(Invert, SpecExamples) {
  const Inversion a = invert_riemann_map(3.0 / 16.0);
  EXPECT_NEAR(std::abs(a.inner_root - 0.5), 0.0, 1e-15);
  EXPECT_EQ(a.location, Location::Interior);

  const Inversion b = invert_riemann_map(0.25);
  EXPECT_NEAR(std::abs(b.inner_root - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(b.outer_root - 1.0), 0.0, 1e-15);
  EXPECT_EQ(b.location, Location::Boundary);

  const Inversion c = invert_riemann_map(1.0);
  EXPECT_NEAR(std::abs(c.inner_root), 2.0, 1e-14);
  EXPECT_EQ(c.location, Location::Exterior);
}

TEST(Invert, RootsSumToTwoAndReproduceW) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 2000; ++t) {
    const cplx w(u(rng), u(rng));
    const Inversion inv = invert_riemann_map(w);
    EXPECT_LE(std::abs(inv.inner_root + inv.outer_root - 2.0), 1e-14);
    EXPECT_LE(std::abs(riemann_map(inv.inner_root) - w), 1e-10);
    EXPECT_LE(std::abs(inv.inner_root), std::abs(inv.outer_root) + 1e-15);
    EXPECT_EQ(inv.location == Location::Interior, std::abs(inv.inner_root) < 1.0 - kDefaultBoundaryTol);
  }
}

TEST(Sigma, SpecExamples) {
  EXPECT_TRUE(schwarz_sigma(0.0).is_infinite());
  EXPECT_NEAR(std::abs(schwarz_sigma(3.0 / 16.0).value()), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(schwarz_sigma(5.0 / 36.0).value() - (-0.75)), 0.0, 1e-10);
  EXPECT_EQ(schwarz_sigma(0.25), Point(0.25));
  EXPECT_THROW(schwarz_sigma(1.0), Error);
}

TEST(Sigma, MatchesClosedFormInside) {
  std::mt19937_64 rng(5);
  int checked = 0;
  while (checked < 1000) {
    const cplx l = random_in_disk(rng, 0.0, 0.999);
    if (std::abs(l) < 1e-3) continue;
    const cplx w = riemann_map(l);
    EXPECT_LE(std::abs(schwarz_sigma(w).value() - sigma_closed_form(w)), 1e-9 * (1.0 + std::abs(sigma_closed_form(w))));
    ++checked;
  }
}

TEST(Sigma, FixesBoundaryPointwise) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  for (int t = 0; t < 1000; ++t) {
    const cplx w = riemann_map(std::polar(1.0, u(rng)));
    EXPECT_LE(std::abs(schwarz_sigma(w).value() - w), 1e-10);
  }
}

TEST(Sigma, SmallCardioidMapsBackInsideWithFlippedLambda) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 1000; ++t) {
    const cplx l = random_in_disk(rng, 2.0 / 3.0, 1.0 / 3.0 * 0.999);
    const Point image = schwarz_sigma(riemann_map(l));
    ASSERT_TRUE(image.is_finite());
    const Inversion inv = invert_riemann_map(image.value());
    EXPECT_NE(inv.location, Location::Exterior);
    EXPECT_LE(std::abs(inv.inner_root - (2.0 - 1.0 / std::conj(l))), 1e-9);
  }
}

TEST(Sigma, NestedPreimagesStayInside) {
  std::mt19937_64 rng(8);
  for (int n = 1; n <= 6; ++n) {
    const cplx c = 2.0 * n / (2.0 * n + 1.0);
    const double r = 1.0 / (2.0 * n + 1.0);
    for (int t = 0; t < 100; ++t) {
      Point w = riemann_map(random_in_disk(rng, c, r * 0.999));
      for (int k = 0; k <= n; ++k) {
        ASSERT_TRUE(w.is_finite());
        ASSERT_NE(locate(w.value()), Location::Exterior) << "n=" << n << " k=" << k;
        if (k < n) w = schwarz_sigma(w.value());
      }
    }
  }
}

TEST(SigmaPreimages, SpecExamples) {
  const auto inf = sigma_preimages(Point::infinity());
  ASSERT_EQ(inf.size(), 1u);
  EXPECT_EQ(inf[0], cplx(0.0));

  const auto zero = sigma_preimages(Point(0.0));
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_NEAR(std::abs(zero[0] - 3.0 / 16.0), 0.0, 1e-12);

  const auto alpha = sigma_preimages(Point(-0.75));
  bool found = false;
  for (const cplx& w : alpha) found = found || std::abs(w - 5.0 / 36.0) < 1e-12;
  EXPECT_TRUE(found);
}

TEST(SigmaPreimages, ContainStartingPoint) {
  std::mt19937_64 rng(9);
  int checked = 0;
  while (checked < 1000) {
    const cplx l = random_in_disk(rng, 0.0, 0.999);
    if (std::abs(l) < 1e-2) continue;
    const cplx w = riemann_map(l);
    const auto pre = sigma_preimages(schwarz_sigma(w));
    double best = 1e9;
    for (const cplx& p : pre) best = std::min(best, std::abs(p - w));
    EXPECT_LE(best, 1e-9);
    ++checked;
  }
}

TEST(SigmaDbar, MatchesFiniteDifferences) {
  for (double w : {3.0 / 16.0, 5.0 / 36.0}) {
    const double exact = sigma_dbar_magnitude(w);
    EXPECT_GT(exact, 0.0);
    EXPECT_NEAR(exact / dbar_fd(w), 1.0, 1e-6);
  }
  std::mt19937_64 rng(10);
  for (int t = 0; t < 200; ++t) {
    const cplx l = random_in_disk(rng, 0.0, 0.95);
    if (std::abs(l) < 0.05) continue;
    const cplx w = riemann_map(l);
    EXPECT_NEAR(sigma_dbar_magnitude(w) / dbar_fd(w), 1.0, 1e-6);
  }
}

TEST(SigmaDbar, TendsToOneAtTheMirror) {
  for (double theta : {0.5, 1.3, 2.0, 3.0}) {
    double prev_gap = 1e9;
    for (int k = 2; k <= 6; ++k) {
      const cplx l = std::polar(1.0 - std::pow(10.0, -k), theta);
      const double gap = std::abs(sigma_dbar_magnitude(riemann_map(l)) - 1.0);
      EXPECT_LT(gap, prev_gap);
      prev_gap = gap;
    }
    EXPECT_LT(prev_gap, 1e-4);
  }
}

TEST(SigmaDbar, DomainErrors) {
  EXPECT_THROW(sigma_dbar_magnitude(0.0), Error);
  EXPECT_THROW(sigma_dbar_magnitude(-0.75), Error);
  EXPECT_THROW(sigma_dbar_magnitude(2.0), Error);
}
