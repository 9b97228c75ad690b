#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "onofri/constants.hpp"

namespace onofri {

/// A point or vector of R^d.
class PointVec {
public:
  PointVec() = default;
  explicit PointVec(std::size_t n, double fill = 0.0) : v_(n, fill) {}
  PointVec(std::initializer_list<double> xs) : v_(xs) {}
  explicit PointVec(std::vector<double> xs) : v_(std::move(xs)) {}

  std::size_t size() const { return v_.size(); }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }
  std::span<const double> components() const { return v_; }

  double dot(const PointVec& o) const;
  double norm_sq() const { return dot(*this); }
  double norm() const;

  PointVec& operator+=(const PointVec& o);
  PointVec& operator*=(double s);
  friend PointVec operator+(PointVec a, const PointVec& b) { return a += b; }
  friend PointVec operator-(PointVec a, const PointVec& b);
  friend PointVec operator*(double s, PointVec a) { return a *= s; }

  /// Unit vector along coordinate axis i of R^n.
  static PointVec basis(std::size_t n, std::size_t i);

private:
  std::vector<double> v_;
};

/// (1+delta)^q - 1 - q delta, accurate for small delta.
double pow1p_minus_linear(double q, double delta);

// The forms below are invariant under simultaneous rotations of X and Y, so
// they only depend on the Gram entries xx = |X|^2, xy = X.Y, yy = |Y|^2.

/// R_d(X, Y) = |X+Y|^d - |X|^d - d |X|^{d-2} X.Y, with |X|^{d-2}X := 0 at X = 0.
double remainder_R_gram(Dimension d, double xx, double xy, double yy);

/// Q_d(X, Y) = d |X|^{d-4} [(d-2)(X.Y)^2 + |X|^2 |Y|^2], the second t-derivative
/// of |X + tY|^d at t = 0. At X = 0: 2|Y|^2 for d = 2, 0 for d >= 3.
double quadratic_Q_gram(Dimension d, double xx, double xy, double yy);

double remainder_R(Dimension d, const PointVec& X, const PointVec& Y);
double quadratic_Q(Dimension d, const PointVec& X, const PointVec& Y);

/// Magnitude d r^{1/(d-1)} / (1 + r^{d/(d-1)}) of the radial field below.
double field_magnitude(Dimension d, double r);

/// -d |x|^{-(d-2)/(d-1)} x / (1 + |x|^{d/(d-1)}); zero at the origin.
PointVec field_X(Dimension d, const PointVec& x);

/// H_d(x, p) = R_d(field_X(x), (d-1)/d p).
double integrand_H(Dimension d, const PointVec& x, const PointVec& p);

/// G_d(x, p) = Q_d(field_X(x), (d-1)/d p).
double integrand_G(Dimension d, const PointVec& x, const PointVec& p);

/// H_d and G_d at |x| = r for a gradient with radial component p_radial and
/// squared component p_perp_sq orthogonal to x.
double integrand_H_polar(Dimension d, double r, double p_radial, double p_perp_sq);
double integrand_G_polar(Dimension d, double r, double p_radial, double p_perp_sq);

/// Density (d/|S^{d-1}|) (1 + |x|^{d/(d-1)})^{-d} of the probability measure mu_d.
double mu_density(Dimension d, const PointVec& x);
double mu_density_radial(Dimension d, double r);

}  // namespace onofri
