#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "onofri/constants.hpp"
#include "onofri/forms.hpp"

namespace onofri {

/// Power-law behaviour of a radial profile near the origin, at infinity and
/// at the edge of its support, expressed in the variable s = (r/length)^{1/kappa}
/// in which the profile is smooth. Quadrature uses it to pick Jacobi weights.
struct RadialAsymptotics {
  double kappa = 1.0;
  double length = 1.0;
  double value_origin_power = 0.0;  // |u| ~ r^{value_origin_power} as r -> 0
  double grad_origin_power = 1.0;   // |grad u| ~ r^{grad_origin_power}
  std::optional<double> value_tail_power;  // |u| ~ r^{-value_tail_power} as r -> inf
  std::optional<double> grad_tail_power;
  std::optional<double> value_edge_power;  // |u| ~ (R - r)^{value_edge_power} at r = R
  std::optional<double> grad_edge_power;
};

using AxisymEval = std::function<double(double r, double c)>;

/// u(x) = g(|x|, x.e/|x|) together with its partial derivatives.
struct AxisymmetricProfile {
  Dimension dim{2};
  AxisymEval g;
  AxisymEval g_r;
  AxisymEval g_c;
  std::function<double(double r)> g_rr;  // radial profiles only; may be empty
  PointVec axis;
  double support_radius = std::numeric_limits<double>::infinity();
  /// Spheres on which u is smooth but not analytic, e.g. the edges of bumps.
  std::vector<double> kinks;
  std::string label;
  bool radial = false;
  /// True when grad u(0) exists; it then equals g_r(0, 1) e.
  bool gradient_at_origin = false;
  /// True when u is C^2 near the origin.
  bool smooth_at_origin = false;
  std::optional<RadialAsymptotics> asymptotics;

  double value(double r, double c) const { return g(r, c); }
  double operator()(const PointVec& x) const;
  bool compact() const { return support_radius < std::numeric_limits<double>::infinity(); }
};

/// Gradient of u split into its component along x/|x| and the squared norm of
/// the part orthogonal to x.
struct PolarGradient {
  double radial = 0.0;
  double perp_sq = 0.0;
  double norm_sq() const { return radial * radial + perp_sq; }
};

PolarGradient polar_gradient(const AxisymmetricProfile& u, double r, double c);

/// Euclidean gradient by the chain rule grad u = g_r xhat + g_c (e - c xhat)/r.
PointVec gradient_from_axisym(const AxisymmetricProfile& u, const PointVec& x);

/// Parameters accepted by the profile label grammar.
struct ProfileParams {
  double a = 0.0;
  double epsilon = 1.0;
  double sigma = 1.0;
  double amp_A = 1.0;
  double shape_B = 1.0;
  double shift = 0.0;
  double p = 2.0;
  Dimension d{2};
};

/// F_a(x) = (1 + r^{d/(d-1)})^{-(d-1)/(a-d)}, a > d.
AxisymmetricProfile profile_F(double a, Dimension d);

/// v(x) = -d (x.e) / (|x|^{(d-2)/(d-1)} (1 + |x|^{d/(d-1)})).
AxisymmetricProfile profile_v(Dimension d, const PointVec& e);

/// v_a = e . grad log F_a = v / (a - d).
AxisymmetricProfile profile_va(double a, Dimension d, const PointVec& e);

/// A (1 + B r^{p/(p-1)})_+^{-(p-1)/(a-p)}; B must have the sign of a - p.
AxisymmetricProfile gn_extremal(double p, double a, Dimension d, double A, double B);

/// A exp(-r^{p/(p-1)} / sigma) with A chosen so that int |u|^p dx = 1.
AxisymmetricProfile logsob_extremal(double p, Dimension d, double sigma);

AxisymmetricProfile gaussian(Dimension d, double width_sq);
/// exp(1 - 1/(1 - (r/R)^2)) on r < R, zero outside.
AxisymmetricProfile bump(Dimension d, double radius);
AxisymmetricProfile r2_exp(Dimension d);
/// (x.e) exp(-r^2/width_sq).
AxisymmetricProfile angular_gaussian(Dimension d, double width_sq);
/// (x.e)/R times bump(R).
AxisymmetricProfile angular_bump(Dimension d, double radius);
/// u(x) = x.e.
AxisymmetricProfile linear(Dimension d);
AxisymmetricProfile constant(Dimension d, double value);

AxisymmetricProfile scaled(const AxisymmetricProfile& u, double factor);
AxisymmetricProfile plus_constant(const AxisymmetricProfile& u, double shift);
/// u(lambda x).
AxisymmetricProfile dilated(const AxisymmetricProfile& u, double lambda);
/// u(x - t e).
AxisymmetricProfile translated(const AxisymmetricProfile& u, double t);
/// sum_i w_i u_i; all terms must share dimension and axis.
AxisymmetricProfile combination(const std::vector<std::pair<double, AxisymmetricProfile>>& terms);

/// Deterministic collection of at least 20 admissible test functions.
std::vector<AxisymmetricProfile> test_suite(Dimension d, std::uint64_t seed);

/// Parses labels such as "gaussian:s=1.0", "bump:R=2", "v", "Fa:a=100",
/// "va:a=10", "angular:s=1", "gn:p=2,a=3,A=1,B=1", "logsob:p=2,sigma=1".
/// Every label also accepts "scale=<factor>".
AxisymmetricProfile parse_profile_label(const std::string& label, Dimension d);

}  // namespace onofri
