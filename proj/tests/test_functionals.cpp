#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "onofri/constants.hpp"
#include "onofri/errors.hpp"
#include "onofri/functionals.hpp"
#include "onofri/profiles.hpp"
#include "oracles.hpp"

using namespace onofri;
using std::numbers::pi;

namespace {

double rel(double x, double y) { return std::abs(x - y) / std::abs(y); }

double mu_mean(const AxisymmetricProfile& u, Dimension d) {
  RadialDomain dom;
  dom.breakpoints = u.kinks;
  QuadratureSpec spec;
  spec.rel_tol = 1e-13;
  spec.max_refinements = 6;
  return integrate_axisym([&](double r, double c) { return u.value(r, c) * mu_density_radial(d, r); }, d, spec, dom)
      .value;
}

}  // namespace

TEST_CASE("helpers") {
  for (double w : {1e-12, -3e-9, 1e-5, 0.3, -2.0, 5.0}) {
    const double direct = std::abs(w) > 1e-3 ? std::expm1(w) - w : w * w / 2 * (1 + w / 3 + w * w / 12);
    CHECK(rel(exp_minus_linear(w), direct) < 1e-12);
  }
  CHECK(exp_minus_linear(0.0) == 0.0);
  const std::vector<double> w = {0.2, 0.5, 0.3};
  CHECK(centered_log_mean_exp({4.0, 4.0, 4.0}, w, 1.0, 4.0) == 0.0);
  const double s = centered_log_mean_exp({0.0, 1.0, 2.0}, w, 1.0, 1.1);
  CHECK(rel(s, std::log(0.2 * std::exp(-1.1) + 0.5 * std::exp(-0.1) + 0.3 * std::exp(0.9))) < 1e-14);
  // Large values go through the shifted branch without overflow.
  CHECK(std::isfinite(centered_log_mean_exp({0.0, 900.0}, {0.5, 0.5}, 1.0, 450.0)));
}

TEST_CASE("constants have zero deficit") {
  for (int n = 2; n <= 5; ++n) {
    const Dimension d(n);
    for (double c : {0.0, 1.0, -3.7, 25.0}) {
      const FunctionalReport r = onofri_report(constant(d, c), d);
      CHECK(r.lhs == 0.0);
      CHECK(r.rhs == 0.0);
      CHECK(r.deficit == 0.0);
      CHECK(r.quotient_status == QuotientStatus::undefined);
    }
  }
}

TEST_CASE("Onofri functional against independent quadrature") {
  struct Row {
    int d;
    double gl, gr, bl, br;
  };
  const Row rows[] = {
      {2, oracle::onofri_gauss_lhs_2, oracle::onofri_gauss_rhs_2, oracle::onofri_bump2_lhs_2, oracle::onofri_bump2_rhs_2},
      {3, oracle::onofri_gauss_lhs_3, oracle::onofri_gauss_rhs_3, oracle::onofri_bump2_lhs_3, oracle::onofri_bump2_rhs_3},
      {4, oracle::onofri_gauss_lhs_4, oracle::onofri_gauss_rhs_4, oracle::onofri_bump2_lhs_4, oracle::onofri_bump2_rhs_4},
  };
  for (const auto& row : rows) {
    const Dimension d(row.d);
    const FunctionalReport g = onofri_report(gaussian(d, 1.0), d);
    CHECK(rel(g.lhs, row.gl) < 1e-9);
    CHECK(rel(g.rhs, row.gr) < 1e-9);
    CHECK(g.converged);
    const FunctionalReport b = onofri_report(bump(d, 2.0), d);
    CHECK(rel(b.lhs, row.bl) < 1e-9);
    CHECK(rel(b.rhs, row.br) < 1e-9);
    CHECK(g.deficit > 0.0);
    CHECK(b.deficit > 0.0);
    CHECK(rel(g.deficit, onofri_alpha(d) * row.gr - row.gl) < 1e-8);
  }
}

TEST_CASE("planar right-hand side is a quarter of the Dirichlet energy") {
  const Dimension d(2);
  for (const auto& u : test_suite(d, 4)) {
    CAPTURE(u.label);
    const FunctionalReport r = onofri_report(u, d);
    const IntegralResult e = power_integral(u, d, {}, 2.0, true);
    CHECK(std::abs(r.rhs - 0.25 * e.value) <= 1e-9 * std::abs(r.rhs) + 3 * r.quad_error + e.error_estimate);
  }
}

TEST_CASE("Onofri inequality holds on the suite") {
  for (int n = 2; n <= 5; ++n) {
    const Dimension d(n);
    const auto suite = test_suite(d, 1);
    const auto reps = onofri_reports(suite, d);
    REQUIRE(reps.size() == suite.size());
    for (std::size_t i = 0; i < suite.size(); ++i) {
      CAPTURE(suite[i].label);
      // Jensen.
      CHECK(reps[i].lhs >= 0.0);
      CHECK(reps[i].deficit >= -3.0 * reps[i].quad_error);
      CHECK(reps[i].quotient >= 1.0 / onofri_alpha(d) * (1.0 - 1e-9));
      CHECK(reps[i].converged);
    }
  }
}

TEST_CASE("parallel evaluation matches sequential evaluation") {
  const Dimension d(3);
  const auto suite = test_suite(d, 2);
  const auto par = onofri_reports(suite, d);
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const FunctionalReport s = onofri_report(suite[i], d);
    CHECK(s.lhs == par[i].lhs);
    CHECK(s.rhs == par[i].rhs);
    CHECK(s.deficit == par[i].deficit);
  }
}

TEST_CASE("adding a constant changes nothing") {
  for (int n = 2; n <= 4; ++n) {
    const Dimension d(n);
    for (const auto& u : {gaussian(d, 1.0), angular_bump(d, 2.0), r2_exp(d)}) {
      const FunctionalReport a = onofri_report(u, d);
      const FunctionalReport b = onofri_report(plus_constant(u, 7.5), d);
      CHECK(rel(b.lhs, a.lhs) < 1e-11);
      CHECK(rel(b.rhs, a.rhs) < 1e-12);
    }
  }
}

TEST_CASE("small multiples of v approach the sharp constant") {
  const Dimension d(2);
  const FunctionalReport r = onofri_report(scaled(profile_v(d, PointVec::basis(2, 0)), 0.01), d);
  REQUIRE(r.quotient_status == QuotientStatus::finite);
  CHECK(rel(r.quotient, 4 * pi) < 1e-2);
  CHECK(r.quotient >= 4 * pi * (1 - 1e-9));
}

TEST_CASE("Poincare form") {
  for (int n = 2; n <= 4; ++n) {
    const Dimension d(n);
    for (const auto& u : test_suite(d, 1)) {
      const FunctionalReport r = poincare_report(u, d);
      CHECK(r.deficit >= -3.0 * r.quad_error);
    }
    const EigenCheck e = rayleigh_check(d);
    CHECK(e.relative_gap < 1e-8);
    CHECK(std::abs(e.rayleigh - 1.0) < 1e-8);
    if (n == 2) {
      REQUIRE(e.dirichlet_ratio);
      CHECK(rel(*e.dirichlet_ratio, 8 * pi) < 1e-8);
    } else {
      CHECK_FALSE(e.dirichlet_ratio.has_value());
    }
    // The eigenfunction saturates it.
    const FunctionalReport v = poincare_report(profile_v(d, PointVec::basis(n, 0)), d);
    CHECK(std::abs(v.deficit) < 1e-8 * v.lhs);
  }
}

TEST_CASE("linearization of the Onofri functional") {
  for (int n = 2; n <= 4; ++n) {
    const Dimension d(n);
    const LinearizationTable t = linearization_check(angular_gaussian(d, 1.0), d, {0.1, 0.05, 0.025, 0.0125});
    CHECK(t.rows.size() == 4);
    CHECK(std::abs(t.lhs_limit - 1.0) < 1e-6);
    CHECK(std::abs(t.rhs_limit - 1.0) < 1e-6);
    // Errors shrink along the grid.
    CHECK(std::abs(t.rows.back().lhs_ratio - 1) < std::abs(t.rows.front().lhs_ratio - 1));
  }
  CHECK_THROWS_AS(linearization_check(constant(Dimension(2), 1.0), Dimension(2), {0.1, 0.05}), DegenerateError);
  CHECK_THROWS_AS(linearization_check(gaussian(Dimension(2), 1.0), Dimension(2), {0.1}), DomainError);
  CHECK_THROWS_AS(linearization_check(gaussian(Dimension(2), 1.0), Dimension(2), {0.1, 0.0}), DomainError);
}

TEST_CASE("Gagliardo-Nirenberg constants") {
  struct Row {
    double p, a;
    int d;
    double c;
  };
  const Row rows[] = {
      {2, 3, 2, oracle::gn_constant_2_3_2},      {1.5, 2.25, 2, oracle::gn_constant_15_225_2},
      {1.5, 1.25, 2, oracle::gn_constant_15_125_2}, {3, 6, 3, oracle::gn_constant_3_6_3},
      {2.5, 1.75, 3, oracle::gn_constant_25_175_3}, {2, 4, 3, oracle::gn_constant_2_4_3},
  };
  for (const auto& r : rows) {
    CAPTURE(r.p);
    CAPTURE(r.a);
    const Dimension d(r.d);
    CHECK(rel(gn_constant(r.p, r.a, d), r.c) < 1e-9);
    // Any member of the extremal family attains it.
    const double B = r.a > r.p ? 3.7 : -3.7;
    const GNReport ext = gn_report(gn_extremal(r.p, r.a, d, 2.5, B), r.p, r.a, d);
    CHECK(rel(ext.quotient, r.c) < 1e-9);
    CHECK(ext.converged);
    // Gaussians do not.
    const GNReport g = gn_report(gaussian(d, 1.0), r.p, r.a, d);
    CHECK(g.quotient < r.c);
    for (double lambda : {1.0 / 3.0, 3.0, 0.5, 2.0}) {
      CHECK(rel(gn_report(dilated(gaussian(d, 1.0), lambda), r.p, r.a, d).quotient, g.quotient) < 1e-9);
      CHECK(rel(gn_report(scaled(gaussian(d, 1.0), lambda), r.p, r.a, d).quotient, g.quotient) < 1e-9);
    }
  }
  CHECK(rel(gn_constant(2, 3, Dimension(4)), aubin_talenti_constant(Dimension(4))) < 1e-9);
  CHECK_THROWS_AS(gn_constant(2, 2, Dimension(3)), DegenerateError);
  CHECK_THROWS_AS(gn_report(gaussian(Dimension(3), 1.0), 2, 2, Dimension(3)), DegenerateError);
  CHECK_THROWS_AS(gn_report(constant(Dimension(3), 0.0), 2, 3, Dimension(3)), DomainError);
}

TEST_CASE("log-Sobolev") {
  SUBCASE("extremals") {
    for (int n = 2; n <= 4; ++n) {
      const Dimension d(n);
      for (double p : {1.5, 2.0, double(n)}) {
        for (double sigma : {0.5, 1.0, 3.0}) {
          const LogSobolevReport r = logsob_report(logsob_extremal(p, d, sigma), p, d);
          CHECK(std::abs(r.deficit) < 1e-9);
          CHECK(r.converged);
        }
      }
    }
  }
  SUBCASE("the p = 2 Gaussian of any width is extremal") {
    for (double s : {0.3, 1.0, 5.0}) {
      const Dimension d(3);
      const LogSobolevReport r = logsob_report(normalized_lp(gaussian(d, s), 2, d), 2, d);
      CHECK(std::abs(r.deficit) < 1e-9);
    }
  }
  SUBCASE("other profiles have positive deficit, invariant under dilation") {
    for (int n = 2; n <= 3; ++n) {
      const Dimension d(n);
      const double base = logsob_report(normalized_lp(r2_exp(d), 2, d), 2, d).deficit;
      CHECK(base > 1e-3);
      for (double lambda : {0.5, 2.0}) {
        const double other = logsob_report(normalized_lp(dilated(r2_exp(d), lambda), 2, d), 2, d).deficit;
        CHECK(std::abs(other - base) < 1e-8);
      }
      CHECK(logsob_report(normalized_lp(bump(d, 1.0), 2, d), 2, d).deficit > 1e-3);
      CHECK(logsob_report(normalized_lp(gaussian(d, 1.0), 1.5, d), 1.5, d).deficit > 1e-4);
    }
  }
  SUBCASE("the pi power is pinned by the extremal") {
    const Dimension d(3);
    const LogSobolevReport good = logsob_report(logsob_extremal(2, d, 1), 2, d);
    const LogSobolevReport bad = logsob_report(logsob_extremal(2, d, 1), 2, d, {}, PiExponent::half_d);
    CHECK(std::abs(good.deficit) < 1e-9);
    CHECK(std::abs(bad.deficit) > 1e-2);
  }
  SUBCASE("input checks") {
    const Dimension d(2);
    CHECK_THROWS_AS(logsob_report(gaussian(d, 1.0), 2, d), DomainError);
    CHECK_THROWS_AS(logsob_report(logsob_extremal(2, d, 1), 2.5, d), DomainError);
    CHECK_THROWS_AS(normalized_lp(constant(d, 0.0), 2, d), DomainError);
  }
}

TEST_CASE("mean_zero") {
  for (int n = 2; n <= 4; ++n) {
    const Dimension d(n);
    for (const auto& u : {gaussian(d, 1.0), bump(d, 2.0), r2_exp(d), scaled(bump(d, 0.5), -4.0)}) {
      CAPTURE(u.label);
      const AxisymmetricProfile z = mean_zero(u, d);
      CHECK(std::abs(mu_mean(z, d)) < 1e-11 * std::max(1.0, std::abs(mu_mean(u, d))));
      CHECK(z.compact() == u.compact());
      if (u.compact()) CHECK(z.support_radius <= u.support_radius);
    }
    // Odd profiles already have mean zero.
    const AxisymmetricProfile odd = angular_gaussian(d, 1.0);
    CHECK(mean_zero(odd, d)(PointVec(n, 0.3)) == doctest::Approx(odd(PointVec(n, 0.3))).epsilon(1e-12));
  }
}

TEST_CASE("limit lab") {
  SUBCASE("u = 0") {
    const LimitLabReport r = limit_lab(constant(Dimension(3), 0.0), Dimension(3), {10, 20});
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(std::abs(r.ratio_i[i] - 1.0) < 1e-14);
      CHECK(std::abs(r.ratio_ii[i] - 1.0) < 1e-14);
      CHECK(std::abs(r.ratio_iii[i] - 1.0) < 1e-14);
    }
    CHECK(r.target_i == 1.0);
    CHECK(r.target_iii == 1.0);
  }
  SUBCASE("rates") {
    const Dimension d(3);
    const AxisymmetricProfile u = bump(d, 2.0);
    const LimitLabReport r = limit_lab(u, d);
    CHECK(r.a_grid == default_a_grid());
    for (const RateFit& f : {r.rate_i, r.rate_ii, r.rate_iii}) {
      CHECK(std::abs(f.slope + 1.0) <= 0.1);
      CHECK(std::abs(f.correlation) >= 0.99);
    }
    const FunctionalReport o = onofri_report(mean_zero(u, d), d);
    CHECK(rel(r.target_iii, std::exp(onofri_alpha(d) * o.rhs)) < 1e-6);
    CHECK(rel(r.target_i, std::exp(o.lhs)) < 1e-9);
    CHECK(std::abs(r.ratio_i.back() - r.target_i) < std::abs(r.ratio_i.front() - r.target_i));
    CHECK(std::abs(r.ratio_iii.back() - r.target_iii) < std::abs(r.ratio_iii.front() - r.target_iii));
    CHECK(r.fitted_rate < -0.9);
  }
  SUBCASE("input checks") {
    CHECK_THROWS_AS(limit_lab(bump(Dimension(3), 2.0), Dimension(3), {}), DomainError);
    CHECK_THROWS_AS(limit_lab(bump(Dimension(3), 2.0), Dimension(3), {2.5, 50}), DomainError);
    CHECK_THROWS_AS(limit_lab(scaled(bump(Dimension(3), 2.0), 500.0), Dimension(3), {4.0}), DomainError);
  }
}

TEST_CASE("extrapolated quotient along v") {
  for (int n = 2; n <= 4; ++n) {
    const Dimension d(n);
    const QuotientExtrapolation q = quotient_extrapolation(profile_v(d, PointVec::basis(n, 0)), d);
    CHECK(q.quotients.size() == default_eps_grid().size());
    const double target = 1.0 / onofri_alpha(d);
    CHECK(rel(q.value, target) < 1e-4);
    for (double x : q.quotients) CHECK(x >= target * (1 - 1e-9));
    CHECK(std::abs(q.quotients.back() - target) < std::abs(q.quotients.front() - target));
  }
  const Dimension d(2);
  CHECK_THROWS_AS(quotient_extrapolation(constant(d, 1.0), d), DegenerateError);
  CHECK_THROWS_AS(quotient_extrapolation(profile_v(d, PointVec::basis(2, 0)), d, {0.1}), DomainError);
  CHECK_THROWS_AS(quotient_extrapolation(profile_v(d, PointVec::basis(2, 0)), d, {0.1, -0.05}), DomainError);
}

TEST_CASE("second variation identity") {
  struct Row {
    double a;
    int d;
    double lhs, grad, at;
  };
  const Row rows[] = {
      {10, 2, oracle::sv_lhs_10_2, oracle::sv_grad_10_2, oracle::sv_a_10_2},
      {10, 3, oracle::sv_lhs_10_3, oracle::sv_grad_10_3, oracle::sv_a_10_3},
      {20, 4, oracle::sv_lhs_20_4, oracle::sv_grad_20_4, oracle::sv_a_20_4},
  };
  for (const auto& r : rows) {
    const Dimension d(r.d);
    const SecondVariationEval s = second_variation(r.a, d, PointVec::basis(r.d, 0));
    CHECK(rel(s.term_lhs, r.lhs) < 1e-8);
    CHECK(rel(s.term_grad, r.grad) < 1e-8);
    CHECK(rel(s.term_a, r.at) < 1e-8);
    CHECK(std::abs(s.residual) <= std::max(3 * s.quad_error, 1e-8 * s.scale));
  }
  // The a-term fades as a grows.
  for (int n = 2; n <= 4; ++n) {
    const Dimension d(n);
    double prev = 1.0;
    for (double a : {10.0, 40.0, 160.0, 640.0}) {
      if (a <= n) continue;
      const SecondVariationEval s = second_variation(a, d, PointVec::basis(n, 0));
      CHECK(std::abs(s.residual) <= std::max(3 * s.quad_error, 1e-8 * s.scale));
      const double share = s.term_a / s.term_lhs;
      CHECK(share < prev);
      prev = share;
    }
    CHECK(prev < 0.05);
  }
  CHECK_THROWS_AS(second_variation(3.0, Dimension(3), PointVec::basis(3, 0)), DomainError);
}

TEST_CASE("planar GN display of the Onofri quotient") {
  const Dimension d(2);
  const AxisymmetricProfile u = bump(d, 2.0);
  const OnofriGNDisplay g = onofri_gn_display(u, {25, 50, 100, 200, 400});
  const AxisymmetricProfile z = mean_zero(u, d);
  const FunctionalReport o = onofri_report(z, d);
  CHECK(rel(g.target, std::exp(o.rhs / (4 * pi)) / std::exp(o.lhs + o.mean_u)) < 1e-9);
  CHECK(g.values.size() == 5);
  // GN inequality: every value is at least 1.
  for (double v : g.values) CHECK(v >= 1.0 - 1e-9);
  CHECK(std::abs(g.values.back() - g.target) < std::abs(g.values.front() - g.target));
  CHECK(rel(g.extrapolated, g.target) < 1e-4);
  CHECK_THROWS_AS(onofri_gn_display(u, {}), DomainError);
  CHECK_THROWS_AS(onofri_gn_display(u, {1.0, 2.0}), DomainError);
}
