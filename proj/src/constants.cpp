#include "onofri/constants.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "onofri/errors.hpp"

namespace onofri {

namespace {

constexpr double kPi = std::numbers::pi;

void require_p(double p, Dimension d) {
  if (!(p > 1.0) || p > d.real()) {
    throw DomainError("exponent p = " + std::to_string(p) + " must lie in (1, d] with d = " +
                      std::to_string(d.value()));
  }
}

}  // namespace

Dimension::Dimension(int d) : d_(d) {
  if (d < 2) throw DomainError("dimension must be an integer d >= 2, got " + std::to_string(d));
}

// std::lgamma / std::tgamma are accurate to a few ulp on (0, 50], which is all
// the constants below need.
double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma requires x > 0");
  return std::lgamma(x);
}

double gamma_fn(double x) {
  if (!(x > 0.0)) throw DomainError("gamma_fn requires x > 0");
  return std::tgamma(x);
}

double log_beta(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) throw DomainError("Beta function requires positive arguments");
  return std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y);
}

double beta_fn(double x, double y) {
  // Small second argument: B(x, y) ~ 1/y, keep the direct Gamma quotient
  // where it does not overflow.
  if (x + y < 150.0) return std::tgamma(x) * std::tgamma(y) / std::tgamma(x + y);
  return std::exp(log_beta(x, y));
}

double sphere_area(Dimension d) {
  const double h = 0.5 * d.real();
  return 2.0 * std::pow(kPi, h) / std::tgamma(h);
}

double onofri_alpha(Dimension d) {
  const double n = d.real();
  const double h = 0.5 * n;
  return std::pow(n, 1.0 - n) * std::tgamma(h) / (2.0 * (n - 1.0) * std::pow(kPi, h));
}

double logsob_beta(double p, Dimension d, PiExponent pi_exponent) {
  require_p(p, d);
  const double n = d.real();
  const double pi_power = pi_exponent == PiExponent::half_p ? 0.5 * p : 0.5 * n;
  const double gamma_ratio =
      std::exp(std::lgamma(0.5 * n + 1.0) - std::lgamma(n * (p - 1.0) / p + 1.0));
  return (p / n) * std::pow((p - 1.0) / std::numbers::e, p - 1.0) * std::pow(kPi, -pi_power) *
         std::pow(gamma_ratio, p / n);
}

double gn_a_max(double p, Dimension d) {
  if (p == d.real()) return std::numeric_limits<double>::infinity();
  return p * (d.real() - 1.0) / (d.real() - p);
}

GNExponents gn_exponents(double p, double a, Dimension d) {
  require_p(p, d);
  if (!(a > 1.0)) throw DomainError("index a must exceed 1");
  if (a > gn_a_max(p, d)) {
    throw DomainError("index a = " + std::to_string(a) + " exceeds p(d-1)/(d-p) = " +
                      std::to_string(gn_a_max(p, d)));
  }
  const double n = d.real();
  GNExponents e;
  e.p = p;
  e.a = a;
  e.b = p * (a - 1.0) / (p - 1.0);
  if (a > p) {
    e.regime = GNRegime::a_above_p;
    e.theta = (a - p) * n / ((a - 1.0) * (n * p - (n - p) * a));
  } else if (a < p) {
    e.regime = GNRegime::a_below_p;
    e.theta = (p - a) * n / (a * (n * (p - a) + p * (a - 1.0)));
  } else {
    e.regime = GNRegime::degenerate;
  }
  return e;
}

SharpConstants sharp_constants(Dimension d, double p) {
  SharpConstants c;
  c.alpha_d = onofri_alpha(d);
  c.one_over_alpha = 1.0 / c.alpha_d;
  c.sphere_area = sphere_area(d);
  c.beta_pd = logsob_beta(p, d);
  return c;
}

// With s = r^{d/(d-1)} one has r^{d-1} dr = ((d-1)/d) s^{d-2} ds and
// |x|^{1/(d-1)} = s^{1/d}, so every moment becomes
//   int_0^inf s^{x-1} (1+s)^{-(x+y)} ds = B(x, y).
// Writing m = (d-1)/(a-d) and k = d/(d-1):
//   int F_a^q dx       = |S| (d-1)/d B(d-1, m q - (d-1)),
//   int |grad F_a|^d dx = |S| (m k)^d / k B(d, d m).
double fa_moment_closed(double a, Dimension d, MomentKind kind) {
  const double n = d.real();
  if (!(a > n)) throw DomainError("F_a moments require a > d");
  const double m = (n - 1.0) / (a - n);
  const double k = n / (n - 1.0);
  const double area = sphere_area(d);
  switch (kind) {
    case MomentKind::grad_d:
      return area * std::pow(m * k, n) / k * std::exp(log_beta(n, n * m));
    case MomentKind::pow_a:
      return area * (n - 1.0) / n * std::exp(log_beta(n - 1.0, m * a - (n - 1.0)));
    case MomentKind::pow_b: {
      const double q = n * (a - 1.0) / (n - 1.0);
      return area * (n - 1.0) / n * std::exp(log_beta(n - 1.0, m * q - (n - 1.0)));
    }
  }
  throw DomainError("unknown moment kind");
}

double fa_moment_asymptotic(double a, Dimension d, MomentKind kind) {
  const double n = d.real();
  const double h = 0.5 * n;
  switch (kind) {
    case MomentKind::grad_d:
      return 2.0 * std::pow(n, n - 2.0) * std::pow(kPi, h) / std::tgamma(h) * std::pow(a, 1.0 - n);
    case MomentKind::pow_a:
      return 2.0 * a * std::pow(kPi, h) / (n * n * std::tgamma(h));
    case MomentKind::pow_b:
      return sphere_area(d) / n;
  }
  throw DomainError("unknown moment kind");
}

double aubin_talenti_constant(Dimension d) {
  const double n = d.real();
  if (d.value() < 3) throw DomainError("the Sobolev endpoint needs d >= 3");
  return 1.0 / std::sqrt(kPi * n * (n - 2.0)) *
         std::pow(std::tgamma(n) / std::tgamma(0.5 * n), 1.0 / n);
}

}  // namespace onofri
