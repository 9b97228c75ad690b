#include "onofri/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "onofri/errors.hpp"
#include "onofri/gauss_jacobi.hpp"

namespace onofri {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxAngularNodes = 256;

// Window of the exp-sinh rule: r/L in [1e-15, 1e12].
const double kTauLo = std::asinh(2.0 / kPi * std::log(1e-15));
const double kTauHi = std::asinh(2.0 / kPi * std::log(1e12));
// Window of the tanh-sinh rule: nodes within 1e-15 R of either end.
const double kTauEdge = std::asinh(std::log(1e15) / kPi);

void append(RadialRule& into, const RadialRule& from) {
  into.r.insert(into.r.end(), from.r.begin(), from.r.end());
  into.w.insert(into.w.end(), from.w.begin(), from.w.end());
}

// Mass beyond the last exp-sinh node, from a power-law fit J ~ C r^{-1-s}
// through the two outermost samples. Heavy or rising tails get a large bound.
double truncated_tail(double r_in, double j_in, double r_out, double j_out) {
  if (j_out == 0.0) return 0.0;
  const double mag = std::abs(j_out) * r_out;
  if (j_in == 0.0 || (j_in > 0.0) != (j_out > 0.0)) return mag;
  const double s = -1.0 - std::log(j_out / j_in) / std::log(r_out / r_in);
  return mag / std::max(s, 1e-3);
}

// r = r0 + L exp((pi/2) sinh tau).
RadialRule exp_sinh(double r0, double length, int n) {
  RadialRule rule;
  const double h = (kTauHi - kTauLo) / n;
  rule.r.reserve(n);
  rule.w.reserve(n);
  for (int j = 0; j < n; ++j) {
    const double tau = kTauLo + (j + 0.5) * h;
    const double e = length * std::exp(0.5 * kPi * std::sinh(tau));
    rule.r.push_back(r0 + e);
    rule.w.push_back(h * 0.5 * kPi * std::cosh(tau) * e);
  }
  return rule;
}

// r = r0 + L / (1 + exp(-pi sinh tau)) on [r0, r0 + L].
RadialRule tanh_sinh(double r0, double length, int n) {
  RadialRule rule;
  const double h = 2.0 * kTauEdge / n;
  rule.r.reserve(n);
  rule.w.reserve(n);
  for (int j = 0; j < n; ++j) {
    const double tau = -kTauEdge + (j + 0.5) * h;
    const double u = kPi * std::sinh(tau);
    const double ch = std::cosh(0.5 * u);
    rule.r.push_back(r0 + length / (1.0 + std::exp(-u)));
    rule.w.push_back(h * length * kPi * std::cosh(tau) / (4.0 * ch * ch));
  }
  return rule;
}

// Sorted split points strictly inside (0, support).
std::vector<double> interior_breaks(const RadialDomain& domain) {
  std::vector<double> out;
  for (double b : domain.breakpoints) {
    if (b > 0.0 && b < domain.support_radius && std::isfinite(b)) out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double x, double y) { return y - x <= 1e-12 * y; }), out.end());
  return out;
}

// Gauss-Legendre on [r0, r0 + R].
RadialRule legendre_interval(double r0, double radius, int n) {
  const auto gl = gauss_legendre(n);
  RadialRule rule;
  for (int i = 0; i < n; ++i) {
    rule.r.push_back(r0 + 0.5 * radius * (1.0 + gl->x[i]));
    rule.w.push_back(0.5 * radius * gl->w[i]);
  }
  return rule;
}

// r = r0 + L t/(1-t), t in (0, 1).
RadialRule rational_tail(double r0, double length, int n) {
  const auto gl = gauss_legendre(n);
  RadialRule rule;
  for (int i = 0; i < n; ++i) {
    const double t = 0.5 * (1.0 + gl->x[i]);
    const double one_minus_t = 0.5 * (1.0 - gl->x[i]);
    rule.r.push_back(r0 + length * t / one_minus_t);
    rule.w.push_back(0.5 * gl->w[i] * length / (one_minus_t * one_minus_t));
  }
  return rule;
}

// Gauss-Jacobi in t with weight t^beta (1-t)^alpha, r = r(t).
RadialRule power_rule(const RadialHints& hints, double support, int n) {
  const double kappa = hints.kappa;
  const double beta = kappa * (hints.origin_power + 1.0) - 1.0;
  const bool compact = support < std::numeric_limits<double>::infinity();
  double alpha = 0.0;
  if (compact && hints.edge_power) alpha = *hints.edge_power;
  if (!compact && hints.tail_power) alpha = kappa * *hints.tail_power - 1.0;
  if (!(beta > -1.0) || !(alpha > -1.0)) {
    throw DomainError("power transform hints give a non-integrable Jacobi weight");
  }
  const auto gj = gauss_jacobi(n, alpha, beta);
  const double scale = std::exp(-(alpha + beta + 1.0) * std::log(2.0));
  RadialRule rule;
  for (int i = 0; i < n; ++i) {
    const double t = 0.5 * (1.0 + gj->x[i]);
    const double one_minus_t = 0.5 * (1.0 - gj->x[i]);
    double r;
    double drdt;
    if (compact) {
      r = support * std::pow(t, kappa);
      drdt = support * kappa * std::pow(t, kappa - 1.0);
    } else {
      const double s = t / one_minus_t;
      r = hints.length * std::pow(s, kappa);
      drdt = hints.length * kappa * std::pow(s, kappa - 1.0) / (one_minus_t * one_minus_t);
    }
    const double weight_fn = std::pow(t, beta) * std::pow(one_minus_t, alpha);
    rule.r.push_back(r);
    rule.w.push_back(gj->w[i] * scale * drdt / weight_fn);
  }
  return rule;
}

std::string location(double r, double c) {
  std::ostringstream os;
  os.precision(17);
  os << "r = " << r << ", c = " << c;
  return os.str();
}

}  // namespace

RadialHints power_hints(const RadialAsymptotics& as, Dimension d, double q, bool gradient) {
  RadialHints h;
  h.kappa = as.kappa;
  h.length = as.length;
  const double n = d.real();
  h.origin_power = n - 1.0 + q * (gradient ? as.grad_origin_power : as.value_origin_power);
  const auto& tail = gradient ? as.grad_tail_power : as.value_tail_power;
  const auto& edge = gradient ? as.grad_edge_power : as.value_edge_power;
  if (tail) h.tail_power = q * *tail - n;
  if (edge) h.edge_power = q * *edge;
  return h;
}

void QuadratureSpec::validate() const {
  if (radial_nodes < 8) throw DomainError("radial_nodes must be >= 8");
  if (angular_nodes < 4) throw DomainError("angular_nodes must be >= 4");
  if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be positive");
  if (max_refinements < 0) throw DomainError("max_refinements must be >= 0");
  if (!(length_scale > 0.0)) throw DomainError("length_scale must be positive");
}

RadialRule radial_rule(const QuadratureSpec& spec, Dimension d, int level, const RadialDomain& domain) {
  spec.validate();
  const int n = spec.radial_nodes << level;
  const double support = domain.support_radius;
  const bool compact = support < std::numeric_limits<double>::infinity();
  if (compact && !(support > 0.0)) throw DomainError("support radius must be positive");
  const double length = spec.length_scale;
  switch (spec.radial_transform) {
    case RadialTransform::log_stretch:
    case RadialTransform::rational: {
      const bool ts = spec.radial_transform == RadialTransform::log_stretch;
      std::vector<double> ends = interior_breaks(domain);
      if (compact) ends.push_back(support);
      RadialRule rule;
      double lo = 0.0;
      for (double hi : ends) {
        append(rule, ts ? tanh_sinh(lo, hi - lo, n) : legendre_interval(lo, hi - lo, n));
        lo = hi;
      }
      if (!compact) {
        const double scale = lo > 0.0 ? lo : length;
        append(rule, ts ? exp_sinh(lo, scale, n) : rational_tail(lo, scale, n));
      }
      return rule;
    }
    case RadialTransform::power: {
      RadialHints hints;
      if (domain.hints) {
        hints = *domain.hints;
      } else {
        hints.kappa = (d.real() - 1.0) / d.real();
        hints.length = length;
        hints.origin_power = d.real() - 1.0;
      }
      return power_rule(hints, support, n);
    }
  }
  throw DomainError("unknown radial transform");
}

RadialRule angular_rule(Dimension d, int n) {
  RadialRule rule;
  if (d.value() == 2) {
    // Midpoint trapezoid in the polar angle over [0, pi], doubled by symmetry.
    for (int j = 0; j < n; ++j) {
      rule.r.push_back(std::cos((j + 0.5) * kPi / n));
      rule.w.push_back(2.0 * kPi / n);
    }
    return rule;
  }
  const double expo = 0.5 * (d.real() - 3.0);
  const auto gj = gauss_jacobi(n, expo, expo);
  const double area = sphere_area(Dimension(d.value() - 1));
  rule.r = gj->x;
  rule.w.resize(n);
  for (int j = 0; j < n; ++j) rule.w[j] = gj->w[j] * area;
  return rule;
}

int angular_nodes_at(const QuadratureSpec& spec, int level) {
  return std::min(spec.angular_nodes << level, std::max(kMaxAngularNodes, spec.angular_nodes));
}

AxisymGrid axisym_grid(const QuadratureSpec& spec, Dimension d, int level, const RadialDomain& domain) {
  const RadialRule rad = radial_rule(spec, d, level, domain);
  const RadialRule ang = angular_rule(d, angular_nodes_at(spec, level));
  AxisymGrid grid;
  const std::size_t total = rad.r.size() * ang.r.size();
  grid.r.reserve(total);
  grid.c.reserve(total);
  grid.w.reserve(total);
  const double dm1 = d.real() - 1.0;
  for (std::size_t i = 0; i < rad.r.size(); ++i) {
    const double radial_weight = rad.w[i] * std::pow(rad.r[i], dm1);
    for (std::size_t j = 0; j < ang.r.size(); ++j) {
      grid.r.push_back(rad.r[i]);
      grid.c.push_back(ang.r[j]);
      grid.w.push_back(radial_weight * ang.w[j]);
    }
  }
  return grid;
}

RadialRule radial_grid(const QuadratureSpec& spec, Dimension d, int level, const RadialDomain& domain) {
  RadialRule rule = radial_rule(spec, d, level, domain);
  const double area = sphere_area(d);
  const double dm1 = d.real() - 1.0;
  for (std::size_t i = 0; i < rule.r.size(); ++i) rule.w[i] *= area * std::pow(rule.r[i], dm1);
  return rule;
}

IntegralResult RefinedValues::result(std::size_t i) const {
  return IntegralResult{values.at(i), errors.at(i), nodes_used, converged};
}

RefinedValues refine(const QuadratureSpec& spec,
                     const std::function<std::vector<double>(int, long&)>& at_level) {
  spec.validate();
  RefinedValues out;
  long nodes = 0;
  std::vector<double> prev = at_level(0, nodes);
  const int last = std::max(1, spec.max_refinements);
  for (int level = 1; level <= last; ++level) {
    std::vector<double> cur = at_level(level, nodes);
    if (cur.size() != prev.size()) throw NumericalError("refinement changed the number of outputs");
    out.errors.assign(cur.size(), 0.0);
    bool all = true;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (!std::isfinite(cur[i])) throw NumericalError("non-finite quadrature value");
      out.errors[i] = std::max(std::abs(cur[i] - prev[i]), 4e-15 * std::abs(cur[i]));
      if (out.errors[i] > std::max(spec.rel_tol * std::abs(cur[i]), spec.abs_tol)) all = false;
    }
    out.values = std::move(cur);
    out.levels = level + 1;
    out.converged = all;
    if (all) break;
    prev = out.values;
  }
  out.nodes_used = nodes;
  return out;
}

namespace {

bool truncates(const QuadratureSpec& spec, const RadialDomain& domain) {
  return spec.radial_transform == RadialTransform::log_stretch &&
         !(domain.support_radius < std::numeric_limits<double>::infinity());
}

// Adds the truncation bound to the estimate and re-checks convergence.
IntegralResult with_tail(const QuadratureSpec& spec, IntegralResult r, double tail) {
  if (tail == 0.0) return r;
  r.error_estimate += tail;
  r.converged = r.converged && r.error_estimate <= std::max(spec.rel_tol * std::abs(r.value), spec.abs_tol);
  return r;
}

}  // namespace

IntegralResult integrate_axisym(const AxisymIntegrand& h, Dimension d, const QuadratureSpec& spec,
                                const RadialDomain& domain) {
  // Radial marginal at the two outermost radii of the latest level.
  double r_in = 0.0, j_in = 0.0, r_out = 0.0, j_out = 0.0;
  auto at_level = [&](int level, long& nodes) {
    const AxisymGrid grid = axisym_grid(spec, d, level, domain);
    double sum = 0.0;
    r_in = j_in = r_out = j_out = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double v = h(grid.r[i], grid.c[i]);
      if (!std::isfinite(v)) {
        throw NumericalError("integrand is not finite at " + location(grid.r[i], grid.c[i]));
      }
      sum += grid.w[i] * v;
    }
    nodes += static_cast<long>(grid.size());
    if (truncates(spec, domain)) {
      const RadialRule ang = angular_rule(d, angular_nodes_at(spec, level));
      const std::size_t m = ang.r.size();
      const std::size_t n = grid.size() / m;
      auto marginal = [&](std::size_t i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) acc += ang.w[j] * h(grid.r[i * m + j], ang.r[j]);
        return acc * std::pow(grid.r[i * m], d.real() - 1.0);
      };
      r_in = grid.r[(n - 2) * m];
      r_out = grid.r[(n - 1) * m];
      j_in = marginal(n - 2);
      j_out = marginal(n - 1);
    }
    return std::vector<double>{sum};
  };
  const IntegralResult r = refine(spec, at_level).result(0);
  return truncates(spec, domain) ? with_tail(spec, r, truncated_tail(r_in, j_in, r_out, j_out)) : r;
}

IntegralResult integrate_radial(const RadialIntegrand& h, Dimension d, const QuadratureSpec& spec,
                                const RadialDomain& domain) {
  double r_in = 0.0, j_in = 0.0, r_out = 0.0, j_out = 0.0;
  const double area = sphere_area(d);
  auto at_level = [&](int level, long& nodes) {
    const RadialRule rule = radial_grid(spec, d, level, domain);
    double sum = 0.0;
    const std::size_t n = rule.r.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double v = h(rule.r[i]);
      if (!std::isfinite(v)) {
        throw NumericalError("integrand is not finite at " + location(rule.r[i], 1.0));
      }
      sum += rule.w[i] * v;
      if (i + 2 >= n) {
        const double j = area * std::pow(rule.r[i], d.real() - 1.0) * v;
        if (i + 2 == n) r_in = rule.r[i], j_in = j;
        else r_out = rule.r[i], j_out = j;
      }
    }
    nodes += static_cast<long>(n);
    return std::vector<double>{sum};
  };
  const IntegralResult r = refine(spec, at_level).result(0);
  return truncates(spec, domain) ? with_tail(spec, r, truncated_tail(r_in, j_in, r_out, j_out)) : r;
}

double p_laplacian_radial(const AxisymmetricProfile& F, Dimension d, double r) {
  if (!F.radial) throw DomainError("p_laplacian_radial needs a radial profile");
  if (r < 0.0) throw DomainError("radius must be nonnegative");
  const double n = d.real();
  auto second = [&](double x) {
    if (F.g_rr) return F.g_rr(x);
    const double h = 1e-5 * (1.0 + x);
    const double lo = std::max(x - h, 0.0);
    return (F.g_r(x + h, 1.0) - F.g_r(lo, 1.0)) / (x + h - lo);
  };
  if (r == 0.0) {
    if (!F.smooth_at_origin) {
      throw NumericalError("d-Laplacian at the origin needs a profile that is C^2 there");
    }
    // F'(r) ~ F''(0) r, so only d = 2 has a nonzero limit.
    return d.value() == 2 ? 2.0 * second(0.0) : 0.0;
  }
  const double fp = F.g_r(r, 1.0);
  // (|F'|^{d-2} F')' = (d-1) |F'|^{d-2} F''.
  return (n - 1.0) * std::pow(std::abs(fp), n - 2.0) * (second(r) + fp / r);
}

}  // namespace onofri
