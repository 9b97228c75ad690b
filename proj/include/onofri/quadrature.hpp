#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "onofri/constants.hpp"
#include "onofri/profiles.hpp"

namespace onofri {

enum class RadialTransform {
  rational,     // r = L t/(1-t), Gauss-Legendre in t
  log_stretch,  // r = L exp((pi/2) sinh tau), trapezoid in tau (tanh-sinh on [0, R])
  power,        // s = (r/L)^{1/kappa}, t = s/(1+s), Gauss-Jacobi in t
};

struct QuadratureSpec {
  RadialTransform radial_transform = RadialTransform::log_stretch;
  int radial_nodes = 48;
  int angular_nodes = 16;
  double rel_tol = 1e-10;
  double abs_tol = 1e-15;
  /// Number of node doublings after the base level; at least one is always
  /// made since the error estimate compares consecutive levels.
  int max_refinements = 4;
  double length_scale = 1.0;

  void validate() const;
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long nodes_used = 0;
  bool converged = false;
};

/// Behaviour of the full radial integrand J(r) = r^{d-1} h(r), used by the
/// power transform to choose Jacobi exponents:
///   J ~ r^{origin_power} at 0, J ~ r^{-1-tail_power} at infinity,
///   J ~ (R - r)^{edge_power} at the edge of a compact support.
struct RadialHints {
  double kappa = 1.0;
  double length = 1.0;
  double origin_power = 0.0;
  std::optional<double> tail_power;
  std::optional<double> edge_power;
};

/// Hints for |f|^q (gradient = false) or |grad f|^q (gradient = true) of a
/// radial profile whose asymptotics are known.
RadialHints power_hints(const RadialAsymptotics& as, Dimension d, double q, bool gradient);

/// int_0^R J(r) dr ~ sum_i w_i J(r_i).
struct RadialRule {
  std::vector<double> r;
  std::vector<double> w;
};

/// int_{R^d} h dx ~ sum_i w_i h(r_i, c_i), axisymmetric h.
struct AxisymGrid {
  std::vector<double> r;
  std::vector<double> c;
  std::vector<double> w;
  std::size_t size() const { return w.size(); }
};

/// Domain information for building grids.
struct RadialDomain {
  double support_radius = std::numeric_limits<double>::infinity();
  /// Radii where the integrand is smooth but not analytic (bump edges). The
  /// radial rule is split there; points outside (0, support) are ignored.
  std::vector<double> breakpoints;
  std::optional<RadialHints> hints;
};

RadialRule radial_rule(const QuadratureSpec& spec, Dimension d, int level, const RadialDomain& domain);

/// Angular nodes c in (-1, 1) with weights that include |S^{d-2}| (d >= 3)
/// or the full circle (d = 2, trapezoid in the polar angle).
RadialRule angular_rule(Dimension d, int n);

/// Node count of the angular rule at a refinement level.
int angular_nodes_at(const QuadratureSpec& spec, int level);

AxisymGrid axisym_grid(const QuadratureSpec& spec, Dimension d, int level, const RadialDomain& domain);

/// Radial nodes with weights |S^{d-1}| r^{d-1} w_i, for radial integrands.
RadialRule radial_grid(const QuadratureSpec& spec, Dimension d, int level, const RadialDomain& domain);

/// Outcome of refining a vector of derived quantities level by level.
struct RefinedValues {
  std::vector<double> values;
  std::vector<double> errors;
  long nodes_used = 0;
  int levels = 0;
  bool converged = false;

  IntegralResult result(std::size_t i) const;
};

/// Evaluates `at_level(l)` for l = 0, 1, ... until every component agrees
/// with the previous level to max(rel_tol |v|, abs_tol), or the refinement
/// budget runs out. `at_level` returns the quantities and adds the number of
/// nodes it used to `nodes`.
RefinedValues refine(const QuadratureSpec& spec,
                     const std::function<std::vector<double>(int level, long& nodes)>& at_level);

using AxisymIntegrand = std::function<double(double r, double c)>;
using RadialIntegrand = std::function<double(double r)>;

IntegralResult integrate_axisym(const AxisymIntegrand& h, Dimension d, const QuadratureSpec& spec,
                                const RadialDomain& domain = {});

IntegralResult integrate_radial(const RadialIntegrand& h, Dimension d, const QuadratureSpec& spec,
                                const RadialDomain& domain = {});

/// Radial d-Laplacian (|F'|^{d-2} F')' + (d-1)/r |F'|^{d-2} F' of a radial profile.
/// Uses the analytic second derivative when the profile provides one and
/// centred differences of g_r otherwise.
double p_laplacian_radial(const AxisymmetricProfile& F, Dimension d, double r);

}  // namespace onofri
