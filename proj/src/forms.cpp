#include "onofri/forms.hpp"

#include <cmath>
#include <string>

#include "onofri/errors.hpp"

namespace onofri {

namespace {

void require_dim(Dimension d, const PointVec& v, const char* name) {
  if (v.size() != static_cast<std::size_t>(d.value())) {
    throw DomainError(std::string(name) + " has " + std::to_string(v.size()) +
                      " components, expected d = " + std::to_string(d.value()));
  }
}

// |X|^d from |X|^2; integer powers for even d.
double pow_half(double sq, Dimension d) {
  if (sq < 1e-300) return 0.0;
  if (d.value() % 2 == 0) {
    double out = 1.0;
    for (int i = 0; i < d.value() / 2; ++i) out *= sq;
    return out;
  }
  return std::exp(0.5 * d.real() * std::log(sq));
}

}  // namespace

double PointVec::dot(const PointVec& o) const {
  if (o.size() != size()) throw DomainError("dot product of vectors with different lengths");
  double s = 0.0;
  for (std::size_t i = 0; i < v_.size(); ++i) s += v_[i] * o.v_[i];
  return s;
}

double PointVec::norm() const { return std::sqrt(norm_sq()); }

PointVec& PointVec::operator+=(const PointVec& o) {
  if (o.size() != size()) throw DomainError("sum of vectors with different lengths");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

PointVec& PointVec::operator*=(double s) {
  for (double& x : v_) x *= s;
  return *this;
}

PointVec operator-(PointVec a, const PointVec& b) {
  if (a.size() != b.size()) throw DomainError("difference of vectors with different lengths");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

PointVec PointVec::basis(std::size_t n, std::size_t i) {
  PointVec e(n);
  e[i] = 1.0;
  return e;
}

double pow1p_minus_linear(double q, double delta) {
  if (std::abs(delta) >= 0.1) return std::expm1(q * std::log1p(delta)) - q * delta;
  // Binomial series from k = 2; |delta| < 0.1 makes 20 terms plenty.
  double term = q * (q - 1.0) * 0.5 * delta * delta;
  double sum = 0.0;
  for (int k = 2; k < 40 && term != 0.0; ++k) {
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    term *= (q - k) / (k + 1.0) * delta;
  }
  return sum;
}

double remainder_R_gram(Dimension d, double xx, double xy, double yy) {
  if (yy == 0.0) return 0.0;
  const double q = 0.5 * d.real();
  if (xx == 0.0) return pow_half(yy, d);
  const double delta = (2.0 * xy + yy) / xx;
  if (std::abs(delta) < 0.5) {
    // |X|^d [ (1+delta)^{d/2} - 1 - (d/2) delta + (d/2) |Y|^2/|X|^2 ]
    return pow_half(xx, d) * (pow1p_minus_linear(q, delta) + q * yy / xx);
  }
  const double sum_sq = std::max(0.0, xx + 2.0 * xy + yy);
  return pow_half(sum_sq, d) - pow_half(xx, d) - d.real() * pow_half(xx, d) / xx * xy;
}

double quadratic_Q_gram(Dimension d, double xx, double xy, double yy) {
  const double n = d.real();
  if (d.value() == 2) return 2.0 * yy;
  if (xx == 0.0) return 0.0;
  const double bracket = (n - 2.0) * xy * xy + xx * yy;
  if (d.value() == 4) return n * bracket;
  return n * std::exp(0.5 * (n - 4.0) * std::log(xx)) * bracket;
}

double remainder_R(Dimension d, const PointVec& X, const PointVec& Y) {
  require_dim(d, X, "X");
  require_dim(d, Y, "Y");
  return remainder_R_gram(d, X.norm_sq(), X.dot(Y), Y.norm_sq());
}

double quadratic_Q(Dimension d, const PointVec& X, const PointVec& Y) {
  require_dim(d, X, "X");
  require_dim(d, Y, "Y");
  return quadratic_Q_gram(d, X.norm_sq(), X.dot(Y), Y.norm_sq());
}

double field_magnitude(Dimension d, double r) {
  if (r <= 0.0) return 0.0;
  const double n = d.real();
  return n * std::pow(r, 1.0 / (n - 1.0)) / (1.0 + std::pow(r, n / (n - 1.0)));
}

PointVec field_X(Dimension d, const PointVec& x) {
  require_dim(d, x, "x");
  const double r = x.norm();
  if (r == 0.0) return PointVec(x.size());
  return (-field_magnitude(d, r) / r) * x;
}

double integrand_H(Dimension d, const PointVec& x, const PointVec& p) {
  require_dim(d, p, "p");
  const PointVec X = field_X(d, x);
  return remainder_R(d, X, ((d.real() - 1.0) / d.real()) * p);
}

double integrand_G(Dimension d, const PointVec& x, const PointVec& p) {
  require_dim(d, p, "p");
  const PointVec X = field_X(d, x);
  return quadratic_Q(d, X, ((d.real() - 1.0) / d.real()) * p);
}

// X = -M xhat, Y = ((d-1)/d) (p_radial xhat + p_perp).
double integrand_H_polar(Dimension d, double r, double p_radial, double p_perp_sq) {
  const double s = (d.real() - 1.0) / d.real();
  const double m = field_magnitude(d, r);
  const double y_rad = s * p_radial;
  return remainder_R_gram(d, m * m, -m * y_rad, y_rad * y_rad + s * s * p_perp_sq);
}

double integrand_G_polar(Dimension d, double r, double p_radial, double p_perp_sq) {
  const double s = (d.real() - 1.0) / d.real();
  const double m = field_magnitude(d, r);
  const double y_rad = s * p_radial;
  return quadratic_Q_gram(d, m * m, -m * y_rad, y_rad * y_rad + s * s * p_perp_sq);
}

double mu_density_radial(Dimension d, double r) {
  const double n = d.real();
  const double base = 1.0 + std::pow(r, n / (n - 1.0));
  return n / sphere_area(d) * std::pow(base, -n);
}

double mu_density(Dimension d, const PointVec& x) {
  require_dim(d, x, "x");
  return mu_density_radial(d, x.norm());
}

}  // namespace onofri
