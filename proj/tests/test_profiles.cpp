#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "onofri/constants.hpp"
#include "onofri/errors.hpp"
#include "onofri/forms.hpp"
#include "onofri/profiles.hpp"
#include "onofri/quadrature.hpp"

using namespace onofri;
using std::numbers::pi;

namespace {

double rel(double x, double y) { return std::abs(x - y) / std::abs(y); }

// Fourth-order central difference along coordinate i.
double fd_partial(const AxisymmetricProfile& u, PointVec x, std::size_t i, double h) {
  auto at = [&](double t) {
    PointVec y = x;
    y[i] += t;
    return u(y);
  };
  return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
}

PointVec random_point(std::mt19937_64& rng, int d, double rmin, double rmax) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> rad(rmin, rmax);
  PointVec x(d);
  for (int i = 0; i < d; ++i) x[i] = g(rng);
  x *= rad(rng) / x.norm();
  return x;
}

std::vector<AxisymmetricProfile> families(Dimension d) {
  const PointVec e = PointVec::basis(d.value(), 0);
  std::vector<AxisymmetricProfile> out = {
      gaussian(d, 1.0),          bump(d, 2.0),
      r2_exp(d),                 angular_gaussian(d, 1.5),
      angular_bump(d, 2.5),      linear(d),
      profile_F(10.0, d),        profile_v(d, e),
      profile_va(12.0, d, e),    logsob_extremal(1.5, d, 1.0),
      gn_extremal(d.real(), d.real() + 2.0, d, 1.0, 1.0),
      translated(gaussian(d, 1.0), 0.4),
      dilated(r2_exp(d), 1.7),
      plus_constant(scaled(angular_gaussian(d, 1.0), -2.0), 3.0),
      combination({{0.5, gaussian(d, 2.0)}, {-1.0, angular_bump(d, 3.0)}}),
  };
  return out;
}

}  // namespace

TEST_CASE("gradients match finite differences") {
  std::mt19937_64 rng(17);
  for (int n = 2; n <= 4; ++n) {
    const Dimension d(n);
    for (const auto& u : families(d)) {
      CAPTURE(u.label);
      CAPTURE(n);
      int tested = 0;
      while (tested < 50) {
        const PointVec x = random_point(rng, n, 0.05, 4.0);
        const double r = x.norm();
        // Keep the stencil away from support edges, where derivatives blow up.
        if (u.compact() && r > u.support_radius - 0.1) continue;
        ++tested;
        const PointVec g = gradient_from_axisym(u, x);
        const double h = 1e-3 * std::min(1.0, r);
        const double scale = std::max(g.norm(), 1e-2);
        for (int i = 0; i < n; ++i) CHECK(std::abs(fd_partial(u, x, i, h) - g[i]) <= 1e-6 * scale);
        const PolarGradient pg = polar_gradient(u, r, x[0] / r);
        CHECK(std::abs(pg.norm_sq() - g.norm_sq()) <= 1e-10 * std::max(1.0, g.norm_sq()));
      }
    }
  }
}

TEST_CASE("compactly supported extremal, inside the ball") {
  std::mt19937_64 rng(18);
  const Dimension d(3);
  const AxisymmetricProfile u = gn_extremal(2.0, 1.5, d, 1.0, -1.0);
  REQUIRE(u.compact());
  CHECK(u.support_radius == doctest::Approx(1.0).epsilon(1e-14));
  for (int i = 0; i < 50; ++i) {
    const PointVec x = random_point(rng, 3, 0.05, 0.85);
    const PointVec g = gradient_from_axisym(u, x);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(fd_partial(u, x, k, 1e-4) - g[k]) <= 1e-6 * std::max(g.norm(), 1e-2));
  }
  CHECK(u.value(1.2, 0.3) == 0.0);
  CHECK(u.value(1.0, 1.0) == 0.0);
}

TEST_CASE("F_a") {
  for (int n = 2; n <= 5; ++n) {
    const Dimension d(n);
    const double a = n + 3.0;
    const AxisymmetricProfile F = profile_F(a, d);
    CHECK(F.radial);
    CHECK(F.value(0.0, 1.0) == 1.0);
    CHECK(rel(F.value(1.0, 0.2), std::pow(2.0, -(n - 1.0) / 3.0)) < 1e-14);
    double prev = 1.0;
    for (int k = 1; k <= 60; ++k) {
      const double r = 0.1 * k;
      const double v = F.value(r, 0.0);
      CHECK(v < prev);
      CHECK(v > 0.0);
      CHECK(F.g_r(r, 0.0) < 0.0);
      prev = v;
    }
  }
  CHECK_THROWS_AS(profile_F(3.0, Dimension(3)), DomainError);
  CHECK_THROWS_AS(profile_F(2.5, Dimension(3)), DomainError);
}

TEST_CASE("a grad F_a tends to the field X") {
  for (int n = 2; n <= 4; ++n) {
    const Dimension d(n);
    for (double r : {0.2, 1.0, 3.0}) {
      PointVec x = PointVec::basis(n, 0);
      x *= r;
      const PointVec X = field_X(d, x);
      double prev = 1e300;
      for (double a : {1e2, 1e3, 1e4}) {
        const PointVec g = gradient_from_axisym(profile_F(a, d), x);
        const double gap = (a * g - X).norm();
        CHECK(gap <= 20.0 / a * std::max(1.0, X.norm()));
        CHECK(gap < prev);
        prev = gap;
      }
    }
  }
}

TEST_CASE("v and v_a") {
  const PointVec e2 = PointVec::basis(2, 0);
  CHECK(profile_v(Dimension(2), e2)(PointVec{1, 0}) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(profile_v(Dimension(2), e2)(PointVec{0, 1}) == 0.0);
  // d = 3, |x| = 1 along e: -3 / 2.
  CHECK(profile_v(Dimension(3), PointVec::basis(3, 0))(PointVec{1, 0, 0}) == doctest::Approx(-1.5).epsilon(1e-15));
  CHECK(profile_v(Dimension(3), PointVec::basis(3, 0))(PointVec{0, 0, 0}) == 0.0);

  CHECK_THROWS_AS(profile_v(Dimension(2), PointVec{1, 1}), DomainError);
  CHECK_THROWS_AS(profile_v(Dimension(3), PointVec{1, 0}), DomainError);
  CHECK_THROWS_AS(profile_va(3.0, Dimension(3), PointVec::basis(3, 0)), DomainError);

  std::mt19937_64 rng(19);
  for (int n = 2; n <= 5; ++n) {
    const Dimension d(n);
    const PointVec e = PointVec::basis(n, 0);
    const AxisymmetricProfile v = profile_v(d, e);
    for (int i = 0; i < 40; ++i) {
      const PointVec x = random_point(rng, n, 0.01, 20.0);
      // v = X . e
      CHECK(std::abs(v(x) - field_X(d, x).dot(e)) < 1e-13 * (1 + std::abs(v(x))));
      for (double a : {n + 0.5, 10.0 * n, 1e3}) {
        const double va = profile_va(a, d, e)(x);
        CHECK(std::abs(va * (a - n) - v(x)) < 1e-13 * (1 + std::abs(v(x))));
        // a v_a - v = d v / (a - d), so a v_a -> v at rate 1/a.
        CHECK(std::abs((a * va - v(x)) - n * v(x) / (a - n)) < 1e-12 * (1 + std::abs(v(x))));
        if (a >= 1e3) CHECK(std::abs(a * va - v(x)) <= 10.0 / a * std::max(1.0, std::abs(v(x))));
      }
    }

    // Odd in the axial cosine, hence centred under mu and orthogonal to radial functions.
    const IntegralResult m =
        integrate_axisym([&](double r, double c) { return v.value(r, c) * mu_density_radial(d, r); }, d, {});
    CHECK(std::abs(m.value) < 1e-12);
    const AxisymmetricProfile va = profile_va(20.0, d, e);
    const IntegralResult o = integrate_axisym(
        [&](double r, double c) { return std::exp(-r * r) * va.value(r, c); }, d, {});
    CHECK(std::abs(o.value) < 1e-12);
  }
}

TEST_CASE("GN extremals") {
  SUBCASE("p = d reproduces F_a") {
    for (int n = 2; n <= 4; ++n) {
      const Dimension d(n);
      const double a = n + 1.7;
      const AxisymmetricProfile u = gn_extremal(n, a, d, 1.0, 1.0);
      const AxisymmetricProfile F = profile_F(a, d);
      for (double r : {0.0, 0.3, 1.0, 7.0, 50.0}) {
        CHECK(rel(u.value(r, 0.5), F.value(r, 0.5)) < 1e-14);
        if (r > 0.0) CHECK(rel(u.g_r(r, 0.5), F.g_r(r, 0.5)) < 1e-13);
      }
    }
  }
  SUBCASE("scaling of A and B") {
    const Dimension d(3);
    const double p = 2.5, a = 2.9;
    const double A = 2.5, B = 3.7;
    const AxisymmetricProfile u = gn_extremal(p, a, d, A, B);
    const AxisymmetricProfile w = gn_extremal(p, a, d, 1.0, 1.0);
    const double lambda = std::pow(B, (p - 1) / p);
    for (double r : {0.0, 0.2, 1.0, 4.0}) CHECK(rel(u.value(r, 0.0), A * w.value(lambda * r, 0.0)) < 1e-13);
  }
  SUBCASE("support") {
    const AxisymmetricProfile u = gn_extremal(2.0, 1.5, Dimension(3), 1.0, -4.0);
    CHECK(u.support_radius == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_FALSE(gn_extremal(2.0, 3.0, Dimension(3), 1.0, 1.0).compact());
  }
  SUBCASE("invalid parameters") {
    CHECK_THROWS_AS(gn_extremal(2.0, 3.0, Dimension(3), 0.0, 1.0), DegenerateError);
    CHECK_THROWS_AS(gn_extremal(2.0, 2.0, Dimension(3), 1.0, 1.0), DegenerateError);
    CHECK_THROWS_AS(gn_extremal(2.0, 3.0, Dimension(3), 1.0, -1.0), DomainError);
    CHECK_THROWS_AS(gn_extremal(2.0, 1.5, Dimension(3), 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(gn_extremal(2.0, 4.0, Dimension(4), 1.0, 1.0), DomainError);
  }
}

TEST_CASE("log-Sobolev extremals are normalized") {
  for (int n = 2; n <= 4; ++n) {
    const Dimension d(n);
    for (double p : {1.25, 1.5, 2.0, double(n)}) {
      if (p > n) continue;
      for (double sigma : {0.3, 1.0, 4.0}) {
        const AxisymmetricProfile u = logsob_extremal(p, d, sigma);
        QuadratureSpec spec;
        spec.rel_tol = 1e-13;
        spec.length_scale = std::pow(sigma, (p - 1) / p);
        const IntegralResult m = integrate_radial([&](double r) { return std::pow(u.value(r, 0.0), p); }, d, spec);
        CHECK(std::abs(m.value - 1.0) < 1e-10);
      }
    }
  }
  // Gaussian at p = 2 in closed form.
  const AxisymmetricProfile g = logsob_extremal(2.0, Dimension(2), 1.0);
  CHECK(rel(g.value(0.0, 0.0), std::sqrt(2.0 / pi)) < 1e-10);
  CHECK_THROWS_AS(logsob_extremal(1.0, Dimension(2), 1.0), DomainError);
  CHECK_THROWS_AS(logsob_extremal(3.0, Dimension(2), 1.0), DomainError);
  CHECK_THROWS_AS(logsob_extremal(2.0, Dimension(2), 0.0), DomainError);
}

TEST_CASE("combinators") {
  const Dimension d(3);
  const AxisymmetricProfile g = gaussian(d, 2.0);
  const PointVec x{0.3, -0.7, 1.1};
  CHECK(scaled(g, -3.0)(x) == doctest::Approx(-3.0 * g(x)).epsilon(1e-15));
  CHECK(plus_constant(g, 0.25)(x) == doctest::Approx(g(x) + 0.25).epsilon(1e-15));
  CHECK(dilated(g, 2.0)(x) == doctest::Approx(g(2.0 * x)).epsilon(1e-14));
  const PointVec shift = 0.4 * PointVec::basis(3, 0);
  CHECK(translated(g, 0.4)(x) == doctest::Approx(g(x - shift)).epsilon(1e-14));
  CHECK(constant(d, 2.0)(x) == 2.0);
  CHECK(linear(d)(x) == doctest::Approx(0.3));

  const AxisymmetricProfile c = combination({{2.0, g}, {-1.0, r2_exp(d)}});
  CHECK(c(x) == doctest::Approx(2.0 * g(x) - r2_exp(d)(x)).epsilon(1e-14));
  CHECK(c.radial);
  CHECK_FALSE(combination({{1.0, g}, {1.0, linear(d)}}).radial);
  CHECK_THROWS_AS(combination({}), DomainError);
  CHECK_THROWS_AS(combination({{1.0, g}, {1.0, gaussian(Dimension(2), 1.0)}}), DomainError);
  CHECK_THROWS_AS(dilated(g, 0.0), DomainError);
}

TEST_CASE("test suite") {
  for (int n = 2; n <= 5; ++n) {
    const Dimension d(n);
    const auto s1 = test_suite(d, 1);
    const auto s1b = test_suite(d, 1);
    const auto s2 = test_suite(d, 2);
    CHECK(s1.size() >= 20);
    REQUIRE(s1.size() == s1b.size());
    bool differs = false;
    std::mt19937_64 rng(20);
    for (std::size_t i = 0; i < s1.size(); ++i) {
      CHECK(s1[i].dim == d);
      CHECK_FALSE(s1[i].label.empty());
      const PointVec x = random_point(rng, n, 0.1, 2.0);
      CHECK(s1[i](x) == s1b[i](x));
      CHECK(std::isfinite(s1[i](x)));
      if (i < s2.size() && s1[i](x) != s2[i](x)) differs = true;
    }
    CHECK(differs);
  }
}

TEST_CASE("profile labels") {
  const Dimension d(3);
  const PointVec x{0.4, 0.1, -0.9};
  CHECK(parse_profile_label("gaussian:s=2", d)(x) == doctest::Approx(gaussian(d, 2.0)(x)).epsilon(1e-15));
  CHECK(parse_profile_label("bump:R=2", d)(x) == doctest::Approx(bump(d, 2.0)(x)).epsilon(1e-15));
  CHECK(parse_profile_label("r2exp", d)(x) == doctest::Approx(r2_exp(d)(x)).epsilon(1e-15));
  CHECK(parse_profile_label("Fa:a=100", d)(x) == doctest::Approx(profile_F(100, d)(x)).epsilon(1e-15));
  CHECK(parse_profile_label("gn:p=2,a=2.5,A=1,B=1", d)(x) ==
        doctest::Approx(gn_extremal(2, 2.5, d, 1, 1)(x)).epsilon(1e-15));
  CHECK(parse_profile_label("logsob:p=2,sigma=1", d)(x) ==
        doctest::Approx(logsob_extremal(2, d, 1)(x)).epsilon(1e-15));
  CHECK(parse_profile_label("gaussian:s=1,scale=3", d)(x) == doctest::Approx(3.0 * gaussian(d, 1.0)(x)).epsilon(1e-15));
  CHECK(parse_profile_label("gaussian:s=1,shift=0.5", d)(x) ==
        doctest::Approx(translated(gaussian(d, 1.0), 0.5)(x)).epsilon(1e-14));
  for (const std::string label : {"v", "va:a=10", "angular:s=1", "angular_bump:R=2", "linear"}) {
    const AxisymmetricProfile u = parse_profile_label(label, d);
    CHECK(u.label == label);
    CHECK(std::isfinite(u(x)));
  }

  CHECK_THROWS_AS(parse_profile_label("nonsense", d), DomainError);
  CHECK_THROWS_AS(parse_profile_label("gaussian:s", d), DomainError);
  CHECK_THROWS_AS(parse_profile_label("gaussian:s=abc", d), DomainError);
  CHECK_THROWS_AS(parse_profile_label("Fa", d), DomainError);
}
