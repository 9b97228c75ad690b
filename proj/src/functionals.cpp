#include "onofri/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "onofri/errors.hpp"
#include "onofri/extrapolation.hpp"
#include "onofri/parallel.hpp"

namespace onofri {

namespace {

void check_dimension(const AxisymmetricProfile& u, Dimension d) {
  if (u.dim != d) throw DomainError("profile '" + u.label + "' lives in a different dimension");
}

void check_finite(double v, const char* what, double r, double c) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os.precision(17);
    os << what << " is not finite at r = " << r << ", c = " << c;
    throw NumericalError(os.str());
  }
}

// Grid for int_{R^d} h dx. Radial profiles do not need the angular rule.
AxisymGrid profile_grid(const AxisymmetricProfile& u, Dimension d, const QuadratureSpec& spec, int level,
                        const RadialDomain& domain) {
  if (!u.radial) return axisym_grid(spec, d, level, domain);
  RadialRule rule = radial_grid(spec, d, level, domain);
  AxisymGrid grid;
  grid.c.assign(rule.r.size(), 1.0);
  grid.r = std::move(rule.r);
  grid.w = std::move(rule.w);
  return grid;
}

// mu_d-weighted integrals of u reach beyond its support.
RadialDomain measure_domain(const AxisymmetricProfile& u) {
  RadialDomain dom;
  dom.breakpoints = u.kinks;
  if (u.compact()) dom.breakpoints.push_back(u.support_radius);
  return dom;
}

// Integrands that vanish with u and grad u.
RadialDomain support_domain(const AxisymmetricProfile& u) {
  RadialDomain dom;
  dom.support_radius = u.support_radius;
  dom.breakpoints = u.kinks;
  return dom;
}

}  // namespace

double exp_minus_linear(double w) {
  if (std::abs(w) < 1e-2) {
    // Taylor series through w^7; the first omitted term is below 1e-16 relative.
    return w * w * (0.5 + w * (1.0 / 6 + w * (1.0 / 24 + w * (1.0 / 120 + w * (1.0 / 720 + w / 5040)))));
  }
  return std::expm1(w) - w;
}

double centered_log_mean_exp(const std::vector<double>& val, const std::vector<double>& wmu, double mass,
                             double mean) {
  double max_abs = 0.0;
  double max_w = -std::numeric_limits<double>::infinity();
  for (double v : val) {
    max_abs = std::max(max_abs, std::abs(v - mean));
    max_w = std::max(max_w, v - mean);
  }
  if (max_abs <= 1e-14 * std::max(1.0, std::abs(mean))) return 0.0;
  if (max_w < 30.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < val.size(); ++i) {
      s += wmu[i] * exp_minus_linear(val[i] - mean);
    }
    return std::log1p(s / mass);
  }
  double s = 0.0;
  for (std::size_t i = 0; i < val.size(); ++i) s += wmu[i] * std::exp(val[i] - mean - max_w);
  return max_w + std::log(s / mass);
}

namespace {

void fill_quotient(FunctionalReport& rep) {
  rep.deficit = 0.0;
  if (rep.lhs > 0.0) {
    rep.quotient = rep.rhs / rep.lhs;
    rep.quotient_status = QuotientStatus::finite;
  } else if (rep.rhs > 0.0) {
    rep.quotient = std::numeric_limits<double>::infinity();
    rep.quotient_status = QuotientStatus::infinite;
  } else {
    rep.quotient = 0.0;
    rep.quotient_status = QuotientStatus::undefined;
  }
}

FunctionalReport mu_form_report(const AxisymmetricProfile& u, Dimension d, const QuadratureSpec& spec,
                                bool quadratic) {
  check_dimension(u, d);
  const RadialDomain dom = measure_domain(u);
  auto at_level = [&](int level, long& nodes) {
    const AxisymGrid g = profile_grid(u, d, spec, level, dom);
    nodes += static_cast<long>(g.size());
    std::vector<double> val(g.size());
    std::vector<double> wmu(g.size());
    double mass = 0.0;
    double first = 0.0;
    double rhs = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = g.r[i];
      const double c = g.c[i];
      val[i] = u.g(r, c);
      check_finite(val[i], "profile value", r, c);
      wmu[i] = g.w[i] * mu_density_radial(d, r);
      mass += wmu[i];
      first += wmu[i] * val[i];
      const PolarGradient pg = polar_gradient(u, r, c);
      const double h = quadratic ? integrand_G_polar(d, r, pg.radial, pg.perp_sq)
                                 : integrand_H_polar(d, r, pg.radial, pg.perp_sq);
      check_finite(h, "gradient integrand", r, c);
      rhs += g.w[i] * h;
    }
    const double mean = first / mass;
    double lhs = 0.0;
    if (quadratic) {
      for (std::size_t i = 0; i < g.size(); ++i) lhs += wmu[i] * (val[i] - mean) * (val[i] - mean);
      lhs /= mass;
    } else {
      lhs = centered_log_mean_exp(val, wmu, mass, mean);
    }
    return std::vector<double>{lhs, rhs, mean};
  };
  const RefinedValues rv = refine(spec, at_level);
  const double alpha = onofri_alpha(d);
  FunctionalReport rep;
  rep.lhs = rv.values[0];
  rep.rhs = rv.values[1];
  rep.mean_u = rv.values[2];
  fill_quotient(rep);
  rep.deficit = alpha * rep.rhs - rep.lhs;
  rep.quad_error = alpha * rv.errors[1] + rv.errors[0];
  rep.nodes_used = rv.nodes_used;
  rep.converged = rv.converged;
  return rep;
}

// int h(u(x), grad u(x)) dx, with the power transform when u is radial and
// its asymptotics are known; `hint_power` is the power of |u| (or |grad u|)
// that governs the integrand's algebraic behaviour.
IntegralResult profile_integral(const AxisymmetricProfile& u, Dimension d, const QuadratureSpec& spec,
                                double hint_power, bool gradient,
                                const std::function<double(double value, double grad_sq)>& h) {
  check_dimension(u, d);
  if (u.radial) {
    auto radial = [&](double r) {
      const double g = gradient ? u.g_r(r, 1.0) : 0.0;
      return h(u.g(r, 1.0), g * g);
    };
    if (u.asymptotics) {
      QuadratureSpec s = spec;
      s.radial_transform = RadialTransform::power;
      RadialDomain dom = support_domain(u);
      dom.hints = power_hints(*u.asymptotics, d, hint_power, gradient);
      return integrate_radial(radial, d, s, dom);
    }
    return integrate_radial(radial, d, spec, support_domain(u));
  }
  auto axisym = [&](double r, double c) {
    const double gsq = gradient ? polar_gradient(u, r, c).norm_sq() : 0.0;
    return h(u.g(r, c), gsq);
  };
  return integrate_axisym(axisym, d, spec, support_domain(u));
}

double relative_error(const IntegralResult& r) {
  return r.value == 0.0 ? 0.0 : r.error_estimate / std::abs(r.value);
}

GNReport gn_quotient(const AxisymmetricProfile& f, double p, double a, Dimension d, const QuadratureSpec& spec) {
  const GNExponents ex = gn_exponents(p, a, d);
  if (ex.regime == GNRegime::degenerate || !ex.theta) {
    throw DegenerateError("the Gagliardo-Nirenberg quotient degenerates at a = p");
  }
  check_dimension(f, d);
  const double theta = *ex.theta;
  const IntegralResult ib = power_integral(f, d, spec, ex.b, false);
  const IntegralResult ig = power_integral(f, d, spec, p, true);
  if (!(ib.value > 0.0) || !(ig.value > 0.0)) throw DomainError("the Gagliardo-Nirenberg quotient needs f != 0");
  GNReport rep;
  rep.exponents = ex;
  rep.norm_b = std::pow(ib.value, 1.0 / ex.b);
  rep.grad_norm_p = std::pow(ig.value, 1.0 / p);
  rep.converged = ib.converged && ig.converged;
  const bool above = ex.regime == GNRegime::a_above_p;
  // The a-norm carries weight (1 - theta) above p; at the Sobolev endpoint it drops out.
  const bool need_a = !above || std::abs(1.0 - theta) > 1e-14;
  IntegralResult ia{};
  if (need_a) {
    ia = power_integral(f, d, spec, a, false);
    rep.norm_a = std::pow(ia.value, 1.0 / a);
    rep.converged = rep.converged && ia.converged;
  } else {
    rep.norm_a = std::numeric_limits<double>::quiet_NaN();
  }
  if (above) {
    const double denom = std::pow(rep.grad_norm_p, theta) * (need_a ? std::pow(rep.norm_a, 1.0 - theta) : 1.0);
    rep.quotient = rep.norm_b / denom;
    rep.quad_error = relative_error(ib) / ex.b + theta * relative_error(ig) / p +
                     (need_a ? (1.0 - theta) * relative_error(ia) / a : 0.0);
  } else {
    rep.quotient = rep.norm_a / (std::pow(rep.grad_norm_p, theta) * std::pow(rep.norm_b, 1.0 - theta));
    rep.quad_error =
        relative_error(ia) / a + theta * relative_error(ig) / p + (1.0 - theta) * relative_error(ib) / ex.b;
  }
  if (!need_a) rep.norm_a = 0.0;
  return rep;
}

// Pieces of the comparison between f = F (1 + kappa u) and F, with
// u = phi - phi_bar:
//   log(int |f|^qb / int F^qb), log(int |f|^qa / int F^qa),
//   log(int |grad f|^qg / int |grad F|^qg).
// Writing s = 1 - kappa phi_bar, f = s F (1 + kappa phi / s), so each ratio
// is s^q (1 + C / base) where C only sees the support of phi.
struct LogRatios {
  double b = 0.0;
  double a = 0.0;
  double grad = 0.0;
  double error = 0.0;
};

LogRatios perturbed_log_ratios(const AxisymmetricProfile& F, const AxisymmetricProfile& phi, double phi_bar,
                               double kappa, double qb, double qa, double qg, Dimension d,
                               const QuadratureSpec& spec) {
  const double s = 1.0 - kappa * phi_bar;
  if (!(s > 0.0)) throw DomainError("1 + (d-1)u/(d a) <= 0: a is too small for this profile");
  const IntegralResult base_b = power_integral(F, d, spec, qb, false);
  const IntegralResult base_a = power_integral(F, d, spec, qa, false);
  const IntegralResult base_g = power_integral(F, d, spec, qg, true);
  const RadialDomain dom = support_domain(phi);
  const double ks = kappa / s;
  auto at_level = [&](int level, long& nodes) {
    const AxisymGrid g = profile_grid(phi, d, spec, level, dom);
    nodes += static_cast<long>(g.size());
    double cb = 0.0, ca = 0.0, cg = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = g.r[i];
      const double c = g.c[i];
      const double ph = phi.g(r, c);
      const double t = ks * ph;
      if (!(1.0 + t > 0.0)) throw DomainError("1 + (d-1)u/(d a) <= 0: a is too small for this profile");
      const double fv = F.g(r, 1.0);
      const double fr = F.g_r(r, 1.0);
      const double l1p = std::log1p(t);
      cb += g.w[i] * std::pow(fv, qb) * std::expm1(qb * l1p);
      ca += g.w[i] * std::pow(fv, qa) * std::expm1(qa * l1p);
      // grad f / s = B + D, B = F' xhat, D = (kappa/s)(phi B + F grad phi).
      const PolarGradient pg = polar_gradient(phi, r, c);
      const double dr = ks * (ph * fr + fv * pg.radial);
      const double dp_sq = ks * ks * fv * fv * pg.perp_sq;
      const double bb = fr * fr;
      double term;
      if (bb > 0.0) {
        const double rel = (2.0 * fr * dr + dr * dr + dp_sq) / bb;
        term = std::pow(bb, 0.5 * qg) * std::expm1(0.5 * qg * std::log1p(rel));
      } else {
        term = std::pow(dr * dr + dp_sq, 0.5 * qg);
      }
      cg += g.w[i] * term;
      check_finite(cb + ca + cg, "perturbed moment integrand", r, c);
    }
    return std::vector<double>{cb, ca, cg};
  };
  const RefinedValues rv = refine(spec, at_level);
  LogRatios out;
  out.b = qb * std::log(s) + std::log1p(rv.values[0] / base_b.value);
  out.a = qa * std::log(s) + std::log1p(rv.values[1] / base_a.value);
  out.grad = qg * std::log(s) + std::log1p(rv.values[2] / base_g.value);
  out.error = rv.errors[0] / base_b.value + rv.errors[1] / base_a.value + rv.errors[2] / base_g.value +
              relative_error(base_b) + relative_error(base_a) + relative_error(base_g);
  return out;
}

RateFit fit_rate(const std::vector<double>& a, const std::vector<double>& ratio, double target) {
  std::vector<double> gap(ratio.size());
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    gap[i] = ratio[i] - target;
    if (gap[i] == 0.0) return {};
  }
  if (a.size() < 2) return {};
  const LogLogFit fit = loglog_fit(a, gap);
  return {fit.slope, fit.correlation};
}

}  // namespace

IntegralResult power_integral(const AxisymmetricProfile& u, Dimension d, const QuadratureSpec& spec, double q,
                              bool gradient) {
  if (gradient) {
    return profile_integral(u, d, spec, q, true, [q](double, double gsq) { return std::pow(gsq, 0.5 * q); });
  }
  return profile_integral(u, d, spec, q, false, [q](double v, double) { return std::pow(std::abs(v), q); });
}

FunctionalReport onofri_report(const AxisymmetricProfile& u, Dimension d, const QuadratureSpec& spec) {
  return mu_form_report(u, d, spec, false);
}

FunctionalReport poincare_report(const AxisymmetricProfile& v, Dimension d, const QuadratureSpec& spec) {
  return mu_form_report(v, d, spec, true);
}

std::vector<FunctionalReport> onofri_reports(const std::vector<AxisymmetricProfile>& profiles, Dimension d,
                                             const QuadratureSpec& spec) {
  std::vector<FunctionalReport> out(profiles.size());
  parallel_for(profiles.size(), [&](std::size_t i) { out[i] = onofri_report(profiles[i], d, spec); });
  return out;
}

LinearizationTable linearization_check(const AxisymmetricProfile& u, Dimension d, const std::vector<double>& eps_grid,
                                       const QuadratureSpec& spec) {
  if (eps_grid.size() < 2) throw DomainError("linearization needs at least two epsilon values");
  for (double e : eps_grid) {
    if (e == 0.0 || !std::isfinite(e)) throw DomainError("epsilon grid must not contain 0");
  }
  LinearizationTable table;
  const FunctionalReport base = poincare_report(u, d, spec);
  if (!(base.lhs > 0.0) || !(base.rhs > 0.0)) {
    throw DegenerateError("linearization of a constant profile is 0/0");
  }
  table.poincare_lhs = base.lhs;
  table.poincare_rhs = base.rhs;
  std::vector<double> h, lr, rr;
  for (double e : eps_grid) {
    const FunctionalReport rep = onofri_report(scaled(u, e), d, spec);
    LinearizationRow row;
    row.epsilon = e;
    row.lhs_ratio = 2.0 * rep.lhs / (e * e * base.lhs);
    row.rhs_ratio = 2.0 * rep.rhs / (e * e * base.rhs);
    table.rows.push_back(row);
    h.push_back(e);
    lr.push_back(row.lhs_ratio);
    rr.push_back(row.rhs_ratio);
  }
  table.lhs_limit = extrapolate_to_zero(h, lr).value;
  table.rhs_limit = extrapolate_to_zero(h, rr).value;
  return table;
}

GNReport gn_report(const AxisymmetricProfile& f, double p, double a, Dimension d, const QuadratureSpec& spec) {
  GNReport rep = gn_quotient(f, p, a, d, spec);
  rep.constant = gn_constant(p, a, d, spec);
  return rep;
}

double gn_constant(double p, double a, Dimension d, const QuadratureSpec& spec) {
  const GNExponents ex = gn_exponents(p, a, d);
  if (ex.regime == GNRegime::degenerate) throw DegenerateError("no Gagliardo-Nirenberg constant at a = p");
  const double B = ex.regime == GNRegime::a_above_p ? 1.0 : -1.0;
  return gn_quotient(gn_extremal(p, a, d, 1.0, B), p, a, d, spec).quotient;
}

AxisymmetricProfile normalized_lp(const AxisymmetricProfile& u, double p, Dimension d, const QuadratureSpec& spec) {
  const IntegralResult n = power_integral(u, d, spec, p, false);
  if (!(n.value > 0.0)) throw DomainError("cannot normalise the zero function");
  AxisymmetricProfile out = scaled(u, std::pow(n.value, -1.0 / p));
  out.label = u.label;
  return out;
}

LogSobolevReport logsob_report(const AxisymmetricProfile& u, double p, Dimension d, const QuadratureSpec& spec,
                               PiExponent pi_exponent) {
  if (!(p > 1.0) || p > d.real()) throw DomainError("log-Sobolev inequality needs 1 < p <= d");
  LogSobolevReport rep;
  const IntegralResult norm = power_integral(u, d, spec, p, false);
  rep.norm_p = norm.value;
  if (std::abs(norm.value - 1.0) > 1e-8) {
    std::ostringstream os;
    os.precision(17);
    os << "log-Sobolev input must satisfy int |u|^p dx = 1; measured " << norm.value;
    throw DomainError(os.str());
  }
  const IntegralResult ent = profile_integral(u, d, spec, p, false, [p](double v, double) {
    const double av = std::abs(v);
    if (av == 0.0) return 0.0;
    return std::pow(av, p) * p * std::log(av);
  });
  const IntegralResult grad = power_integral(u, d, spec, p, true);
  rep.entropy = ent.value;
  rep.grad_integral = grad.value;
  rep.beta = logsob_beta(p, d, pi_exponent);
  rep.rhs = d.real() / p * std::log(rep.beta * grad.value);
  rep.deficit = rep.rhs - rep.entropy;
  rep.quad_error = ent.error_estimate + d.real() / p * relative_error(grad) + norm.error_estimate;
  rep.converged = norm.converged && ent.converged && grad.converged;
  return rep;
}

AxisymmetricProfile mean_zero(const AxisymmetricProfile& u, Dimension d, const QuadratureSpec& spec) {
  check_dimension(u, d);
  // (r/R)^2 times a bump, so that psi is not a multiple of the usual test bumps.
  const double R = u.compact() ? u.support_radius : 1.0;
  const AxisymmetricProfile b = bump(d, R);
  AxisymmetricProfile psi = b;
  psi.g = [b, R](double r, double c) { return r * r / (R * R) * b.g(r, c); };
  psi.g_r = [b, R](double r, double c) { return (2.0 * r * b.g(r, c) + r * r * b.g_r(r, c)) / (R * R); };
  psi.g_rr = nullptr;
  psi.label = "r2bump";
  const RadialDomain dom = measure_domain(u);
  const IntegralResult mu_u =
      u.radial ? integrate_radial([&](double r) { return u.g(r, 1.0) * mu_density_radial(d, r); }, d, spec, dom)
               : integrate_axisym([&](double r, double c) { return u.g(r, c) * mu_density_radial(d, r); }, d, spec,
                                  dom);
  if (mu_u.value == 0.0) return u;
  const IntegralResult mu_psi = integrate_radial(
      [&](double r) { return psi.g(r, 1.0) * mu_density_radial(d, r); }, d, spec, support_domain(psi));
  AxisymmetricProfile out = combination({{1.0, u}, {-mu_u.value / mu_psi.value, psi}});
  out.label = u.label + "|mean0";
  return out;
}

std::vector<double> default_a_grid() { return {50.0, 100.0, 200.0, 400.0, 800.0}; }

LimitLabReport limit_lab(const AxisymmetricProfile& u, Dimension d, const std::vector<double>& a_grid,
                         const QuadratureSpec& spec) {
  if (a_grid.empty()) throw DomainError("a grid must not be empty");
  for (double a : a_grid) {
    if (!(a > d.real())) throw DomainError("every a in the grid must exceed d");
  }
  const AxisymmetricProfile u0 = mean_zero(u, d, spec);
  const FunctionalReport onofri = onofri_report(u0, d, spec);
  const double n = d.real();
  LimitLabReport rep;
  rep.a_grid = a_grid;
  rep.onofri_rhs = onofri.rhs;
  rep.target_i = std::exp(onofri.lhs);
  rep.target_ii = 1.0;
  rep.target_iii = std::exp(onofri_alpha(d) * onofri.rhs);
  for (double a : a_grid) {
    const AxisymmetricProfile F = profile_F(a, d);
    const double kappa = (n - 1.0) / (n * a);
    const double b = n * (a - 1.0) / (n - 1.0);
    const LogRatios lr = perturbed_log_ratios(F, u0, onofri.mean_u, kappa, b, a, n, d, spec);
    rep.ratio_i.push_back(std::exp(lr.b));
    rep.ratio_ii.push_back(std::exp(lr.a));
    rep.ratio_iii.push_back(std::exp((a - n) / (n * (n - 1.0)) * lr.grad));
  }
  rep.rate_i = fit_rate(a_grid, rep.ratio_i, rep.target_i);
  rep.rate_ii = fit_rate(a_grid, rep.ratio_ii, rep.target_ii);
  rep.rate_iii = fit_rate(a_grid, rep.ratio_iii, rep.target_iii);
  rep.fitted_rate = std::max({rep.rate_i.slope, rep.rate_ii.slope, rep.rate_iii.slope});
  return rep;
}

std::vector<double> default_eps_grid() { return {0.2, 0.1, 0.05, 0.025}; }

QuotientExtrapolation quotient_extrapolation(const AxisymmetricProfile& v, Dimension d,
                                             const std::vector<double>& eps_grid, const QuadratureSpec& spec) {
  if (eps_grid.size() < 2) throw DomainError("extrapolation needs at least two epsilon values");
  for (double e : eps_grid) {
    if (!(e > 0.0)) throw DomainError("epsilon values must be positive");
  }
  QuotientExtrapolation out;
  out.eps = eps_grid;
  const std::size_t n = eps_grid.size();
  std::vector<double> q(2 * n);
  parallel_for(2 * n, [&](std::size_t i) {
    const double e = i < n ? eps_grid[i] : -eps_grid[i - n];
    const FunctionalReport rep = onofri_report(scaled(v, e), d, spec);
    if (rep.quotient_status != QuotientStatus::finite) {
      throw DegenerateError("quotient of a constant profile is 0/0");
    }
    q[i] = rep.quotient;
  });
  // (Q(eps) + Q(-eps))/2 is even in eps, so extrapolate in eps^2.
  std::vector<double> h(n);
  out.quotients.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.quotients[i] = 0.5 * (q[i] + q[i + n]);
    h[i] = eps_grid[i] * eps_grid[i];
  }
  const Extrapolated ex = extrapolate_to_zero(h, out.quotients);
  out.value = ex.value;
  out.error_estimate = ex.error_estimate;
  return out;
}

SecondVariationEval second_variation(double a, Dimension d, const PointVec& e, const QuadratureSpec& spec) {
  if (!(a > d.real())) throw DomainError("second variation needs a > d");
  const double n = d.real();
  const double b = n * (a - 1.0) / (n - 1.0);
  const AxisymmetricProfile F = profile_F(a, d);
  const AxisymmetricProfile va = profile_va(a, d, e);
  const IntegralResult den_b = power_integral(F, d, spec, b, false);
  const IntegralResult den_a = power_integral(F, d, spec, a, false);
  const IntegralResult den_g = power_integral(F, d, spec, n, true);
  auto at_level = [&](int level, long& nodes) {
    const AxisymGrid g = axisym_grid(spec, d, level, RadialDomain{});
    nodes += static_cast<long>(g.size());
    double nb = 0.0, na = 0.0, ng = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = g.r[i];
      const double c = g.c[i];
      const double fv = F.g(r, 1.0);
      const double fr = F.g_r(r, 1.0);
      const double v = va.g(r, c);
      nb += g.w[i] * std::pow(fv, b) * v * v;
      na += g.w[i] * std::pow(fv, a) * v * v;
      // grad(F v_a) = (F' v_a + F dv_a/dr) xhat + F (dv_a/dc / r) (e - c xhat).
      const double hr = fr * v + fv * va.g_r(r, c);
      const double hc = fv * va.g_c(r, c) / r;
      const double yy = hr * hr + hc * hc * std::max(0.0, 1.0 - c * c);
      ng += g.w[i] * quadratic_Q_gram(d, fr * fr, fr * hr, yy);
      check_finite(nb + na + ng, "second-variation integrand", r, c);
    }
    return std::vector<double>{nb, na, ng};
  };
  const RefinedValues rv = refine(spec, at_level);
  SecondVariationEval out;
  out.a = a;
  out.term_lhs = b * (b - 1.0) * rv.values[0] / den_b.value;
  out.term_grad = (a - n) / (n * (n - 1.0)) * rv.values[2] / den_g.value;
  out.term_a = a * (a - 1.0) * rv.values[1] / den_a.value;
  out.residual = out.term_lhs - out.term_grad - out.term_a;
  out.scale = std::max({std::abs(out.term_lhs), std::abs(out.term_grad), std::abs(out.term_a)});
  out.quad_error = std::abs(out.term_lhs) * (rv.errors[0] / rv.values[0] + relative_error(den_b)) +
                   std::abs(out.term_grad) * (rv.errors[2] / rv.values[2] + relative_error(den_g)) +
                   std::abs(out.term_a) * (rv.errors[1] / rv.values[1] + relative_error(den_a));
  return out;
}

EigenCheck rayleigh_check(Dimension d, const QuadratureSpec& spec) {
  const AxisymmetricProfile v = profile_v(d, PointVec::basis(static_cast<std::size_t>(d.value()), 0));
  const FunctionalReport rep = poincare_report(v, d, spec);
  EigenCheck out;
  out.rayleigh = onofri_alpha(d) * rep.rhs / rep.lhs;
  out.lambda1_reference = 1.0;
  out.relative_gap = std::abs(out.rayleigh - out.lambda1_reference);
  out.quad_error = rep.quad_error / rep.lhs;
  if (d.value() == 2) {
    const IntegralResult dir =
        integrate_axisym([&](double r, double c) { return polar_gradient(v, r, c).norm_sq(); }, d, spec);
    out.dirichlet_ratio = dir.value / rep.lhs;
    out.dirichlet_reference = 2.0 / onofri_alpha(d);
  }
  return out;
}

OnofriGNDisplay onofri_gn_display(const AxisymmetricProfile& u, const std::vector<double>& q_grid,
                                  const QuadratureSpec& spec) {
  const Dimension d(2);
  check_dimension(u, d);
  if (q_grid.empty()) throw DomainError("q grid must not be empty");
  const AxisymmetricProfile u0 = mean_zero(u, d, spec);
  const FunctionalReport onofri = onofri_report(u0, d, spec);
  OnofriGNDisplay out;
  out.q_grid = q_grid;
  // H_2 = |p|^2/4 and alpha_2 = 1/(4 pi), so the target is e^{deficit}.
  out.target = std::exp(onofri.deficit);
  std::vector<double> h;
  for (double q : q_grid) {
    if (!(q > 1.0)) throw DomainError("q must exceed 1");
    const AxisymmetricProfile F = profile_F(q + 1.0, d);
    const LogRatios lr = perturbed_log_ratios(F, u0, onofri.mean_u, 1.0 / (2.0 * q), 2.0 * q, q + 1.0, 2.0, d, spec);
    out.values.push_back(std::exp(0.5 * (q - 1.0) * lr.grad + lr.a - lr.b));
    h.push_back(1.0 / q);
  }
  out.extrapolated = q_grid.size() >= 2 ? extrapolate_to_zero(h, out.values).value : out.values.front();
  return out;
}

}  // namespace onofri
