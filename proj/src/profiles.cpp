#include "onofri/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>

#include "onofri/errors.hpp"
#include "onofri/quadrature.hpp"

namespace onofri {

namespace {

PointVec default_axis(Dimension d) { return PointVec::basis(static_cast<std::size_t>(d.value()), 0); }

void require_unit_axis(Dimension d, const PointVec& e) {
  if (e.size() != static_cast<std::size_t>(d.value())) {
    throw DomainError("axis must have d components");
  }
  if (std::abs(e.norm() - 1.0) > 1e-14) throw DomainError("axis must be a unit vector");
}

AxisymmetricProfile radial_profile(Dimension d, std::string label, std::function<double(double)> f,
                                   std::function<double(double)> fr) {
  AxisymmetricProfile u;
  u.dim = d;
  u.axis = default_axis(d);
  u.label = std::move(label);
  u.radial = true;
  u.g = [f](double r, double) { return f(r); };
  u.g_r = [fr](double r, double) { return fr(r); };
  u.g_c = [](double, double) { return 0.0; };
  return u;
}

// Bump b(r) = exp(1 - 1/(1 - (r/R)^2)) and its derivative.
double bump_value(double r, double R) {
  if (r >= R) return 0.0;
  const double q = r / R;
  return std::exp(1.0 - 1.0 / (1.0 - q * q));
}

double bump_derivative(double r, double R) {
  if (r >= R) return 0.0;
  const double q = r / R;
  const double den = 1.0 - q * q;
  return bump_value(r, R) * (-2.0 * q / (R * den * den));
}

// splitmix64; portable across standard libraries.
struct SplitMix {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
};

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

double AxisymmetricProfile::operator()(const PointVec& x) const {
  const double r = x.norm();
  if (r == 0.0) return g(0.0, 1.0);
  return g(r, x.dot(axis) / r);
}

PolarGradient polar_gradient(const AxisymmetricProfile& u, double r, double c) {
  PolarGradient pg;
  pg.radial = u.g_r(r, c);
  if (!u.radial && r > 0.0) {
    const double t = u.g_c(r, c) / r;
    pg.perp_sq = t * t * std::max(0.0, 1.0 - c * c);
  }
  return pg;
}

PointVec gradient_from_axisym(const AxisymmetricProfile& u, const PointVec& x) {
  if (x.size() != u.axis.size()) throw DomainError("point dimension does not match the profile");
  const double r = x.norm();
  if (r == 0.0) {
    if (!u.gradient_at_origin) {
      throw NumericalError("gradient of '" + u.label + "' is not defined at the origin");
    }
    return u.g_r(0.0, 1.0) * u.axis;
  }
  const PointVec xhat = (1.0 / r) * x;
  const double c = std::clamp(xhat.dot(u.axis), -1.0, 1.0);
  PointVec grad = u.g_r(r, c) * xhat;
  if (!u.radial) grad += (u.g_c(r, c) / r) * (u.axis - c * xhat);
  return grad;
}

AxisymmetricProfile profile_F(double a, Dimension d) {
  const double n = d.real();
  if (!(a > n)) throw DomainError("F_a requires a > d");
  const double k = n / (n - 1.0);
  const double m = (n - 1.0) / (a - n);
  auto f = [k, m](double r) { return std::pow(1.0 + std::pow(r, k), -m); };
  auto fr = [k, m](double r) {
    if (r == 0.0) return 0.0;
    return -m * k * std::pow(r, k - 1.0) * std::pow(1.0 + std::pow(r, k), -m - 1.0);
  };
  AxisymmetricProfile u = radial_profile(d, "Fa:a=" + fmt(a), f, fr);
  u.g_rr = [k, m](double r) {
    const double s = std::pow(r, k);
    return -m * k *
           ((k - 1.0) * std::pow(r, k - 2.0) * std::pow(1.0 + s, -m - 1.0) -
            (m + 1.0) * k * std::pow(r, 2.0 * k - 2.0) * std::pow(1.0 + s, -m - 2.0));
  };
  u.gradient_at_origin = true;
  u.smooth_at_origin = d.value() == 2;
  RadialAsymptotics as;
  as.kappa = 1.0 / k;
  as.value_origin_power = 0.0;
  as.grad_origin_power = k - 1.0;
  as.value_tail_power = m * k;
  as.grad_tail_power = m * k + 1.0;
  u.asymptotics = as;
  return u;
}

namespace {

// -scale d r^{1/(d-1)} c / (1 + r^{d/(d-1)}).
AxisymmetricProfile v_family(Dimension d, const PointVec& e, double scale, std::string label) {
  require_unit_axis(d, e);
  const double n = d.real();
  const double k = n / (n - 1.0);
  const double j = 1.0 / (n - 1.0);
  const double amp = scale * n;
  AxisymmetricProfile u;
  u.dim = d;
  u.axis = e;
  u.label = std::move(label);
  u.g = [=](double r, double c) { return -amp * std::pow(r, j) * c / (1.0 + std::pow(r, k)); };
  u.g_r = [=](double r, double c) {
    if (r == 0.0) return d.value() == 2 ? -amp * c : 0.0;
    const double s = std::pow(r, k);
    return -amp * c * (j * std::pow(r, j - 1.0) / (1.0 + s) - k * std::pow(r, 2.0 * j) / ((1.0 + s) * (1.0 + s)));
  };
  u.g_c = [=](double r, double) { return -amp * std::pow(r, j) / (1.0 + std::pow(r, k)); };
  u.gradient_at_origin = d.value() == 2;
  u.smooth_at_origin = d.value() == 2;
  return u;
}

}  // namespace

AxisymmetricProfile profile_v(Dimension d, const PointVec& e) { return v_family(d, e, 1.0, "v"); }

AxisymmetricProfile profile_va(double a, Dimension d, const PointVec& e) {
  if (!(a > d.real())) throw DomainError("v_a requires a > d");
  return v_family(d, e, 1.0 / (a - d.real()), "va:a=" + fmt(a));
}

AxisymmetricProfile gn_extremal(double p, double a, Dimension d, double A, double B) {
  if (A == 0.0) throw DegenerateError("extremal amplitude A must be nonzero");
  if (a == p) throw DegenerateError("the interpolation family degenerates at a = p");
  gn_exponents(p, a, d);
  if (B == 0.0 || (B > 0.0) != (a > p)) throw DomainError("B must have the sign of a - p");
  const double q = p / (p - 1.0);
  const double e = (p - 1.0) / (a - p);
  auto f = [=](double r) {
    const double base = 1.0 + B * std::pow(r, q);
    if (base <= 0.0) return 0.0;
    return A * std::pow(base, -e);
  };
  auto fr = [=](double r) {
    const double base = 1.0 + B * std::pow(r, q);
    if (base <= 0.0 || r == 0.0) return 0.0;
    return -A * e * std::pow(base, -e - 1.0) * B * q * std::pow(r, q - 1.0);
  };
  AxisymmetricProfile u =
      radial_profile(d, "gn:p=" + fmt(p) + ",a=" + fmt(a) + ",A=" + fmt(A) + ",B=" + fmt(B), f, fr);
  u.gradient_at_origin = true;
  u.smooth_at_origin = q >= 2.0;
  RadialAsymptotics as;
  as.kappa = 1.0 / q;
  as.length = std::pow(std::abs(B), -1.0 / q);
  as.value_origin_power = 0.0;
  as.grad_origin_power = q - 1.0;
  if (a > p) {
    as.value_tail_power = e * q;
    as.grad_tail_power = e * q + 1.0;
  } else {
    u.support_radius = as.length;
    u.kinks = {as.length};
    as.value_edge_power = -e;
    as.grad_edge_power = -e - 1.0;
  }
  u.asymptotics = as;
  return u;
}

AxisymmetricProfile logsob_extremal(double p, Dimension d, double sigma) {
  if (!(p > 1.0) || p > d.real()) throw DomainError("log-Sobolev extremal needs 1 < p <= d");
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  const double q = p / (p - 1.0);
  QuadratureSpec spec;
  spec.rel_tol = 1e-13;
  spec.max_refinements = 5;
  spec.length_scale = std::pow(sigma, 1.0 / q);
  const IntegralResult mass =
      integrate_radial([=](double r) { return std::exp(-p * std::pow(r, q) / sigma); }, d, spec);
  if (!mass.converged) throw NumericalError("normalisation integral of the log-Sobolev extremal did not converge");
  const double A = std::pow(mass.value, -1.0 / p);
  auto f = [=](double r) { return A * std::exp(-std::pow(r, q) / sigma); };
  auto fr = [=](double r) {
    if (r == 0.0) return 0.0;
    return -A * q / sigma * std::pow(r, q - 1.0) * std::exp(-std::pow(r, q) / sigma);
  };
  AxisymmetricProfile u = radial_profile(d, "logsob:p=" + fmt(p) + ",sigma=" + fmt(sigma), f, fr);
  u.gradient_at_origin = true;
  u.smooth_at_origin = q >= 2.0;
  RadialAsymptotics as;
  as.kappa = 1.0 / q;
  as.length = std::pow(sigma, 1.0 / q);
  as.grad_origin_power = q - 1.0;
  u.asymptotics = as;
  return u;
}

AxisymmetricProfile gaussian(Dimension d, double width_sq) {
  if (!(width_sq > 0.0)) throw DomainError("gaussian width must be positive");
  auto u = radial_profile(
      d, "gaussian:s=" + fmt(width_sq), [=](double r) { return std::exp(-r * r / width_sq); },
      [=](double r) { return -2.0 * r / width_sq * std::exp(-r * r / width_sq); });
  u.g_rr = [=](double r) {
    return (4.0 * r * r / (width_sq * width_sq) - 2.0 / width_sq) * std::exp(-r * r / width_sq);
  };
  u.gradient_at_origin = true;
  u.smooth_at_origin = true;
  return u;
}

AxisymmetricProfile bump(Dimension d, double radius) {
  if (!(radius > 0.0)) throw DomainError("bump radius must be positive");
  auto u = radial_profile(
      d, "bump:R=" + fmt(radius), [=](double r) { return bump_value(r, radius); },
      [=](double r) { return bump_derivative(r, radius); });
  u.support_radius = radius;
  u.kinks = {radius};
  u.gradient_at_origin = true;
  u.smooth_at_origin = true;
  return u;
}

AxisymmetricProfile r2_exp(Dimension d) {
  auto u = radial_profile(
      d, "r2exp", [](double r) { return r * r * std::exp(-r); },
      [](double r) { return (2.0 * r - r * r) * std::exp(-r); });
  u.g_rr = [](double r) { return (2.0 - 4.0 * r + r * r) * std::exp(-r); };
  u.gradient_at_origin = true;
  u.smooth_at_origin = true;
  return u;
}

AxisymmetricProfile angular_gaussian(Dimension d, double width_sq) {
  if (!(width_sq > 0.0)) throw DomainError("gaussian width must be positive");
  AxisymmetricProfile u;
  u.dim = d;
  u.axis = default_axis(d);
  u.label = "angular:s=" + fmt(width_sq);
  u.g = [=](double r, double c) { return r * c * std::exp(-r * r / width_sq); };
  u.g_r = [=](double r, double c) { return c * (1.0 - 2.0 * r * r / width_sq) * std::exp(-r * r / width_sq); };
  u.g_c = [=](double r, double) { return r * std::exp(-r * r / width_sq); };
  u.gradient_at_origin = true;
  u.smooth_at_origin = true;
  return u;
}

AxisymmetricProfile angular_bump(Dimension d, double radius) {
  if (!(radius > 0.0)) throw DomainError("bump radius must be positive");
  AxisymmetricProfile u;
  u.dim = d;
  u.axis = default_axis(d);
  u.label = "angular_bump:R=" + fmt(radius);
  u.g = [=](double r, double c) { return r / radius * c * bump_value(r, radius); };
  u.g_r = [=](double r, double c) {
    return c / radius * (bump_value(r, radius) + r * bump_derivative(r, radius));
  };
  u.g_c = [=](double r, double) { return r / radius * bump_value(r, radius); };
  u.support_radius = radius;
  u.kinks = {radius};
  u.gradient_at_origin = true;
  u.smooth_at_origin = true;
  return u;
}

AxisymmetricProfile linear(Dimension d) {
  AxisymmetricProfile u;
  u.dim = d;
  u.axis = default_axis(d);
  u.label = "linear";
  u.g = [](double r, double c) { return r * c; };
  u.g_r = [](double, double c) { return c; };
  u.g_c = [](double r, double) { return r; };
  u.gradient_at_origin = true;
  u.smooth_at_origin = true;
  return u;
}

AxisymmetricProfile constant(Dimension d, double value) {
  auto u = radial_profile(d, "constant:c=" + fmt(value), [=](double) { return value; }, [](double) { return 0.0; });
  u.g_rr = [](double) { return 0.0; };
  u.gradient_at_origin = true;
  u.smooth_at_origin = true;
  u.support_radius = std::numeric_limits<double>::infinity();
  return u;
}

AxisymmetricProfile scaled(const AxisymmetricProfile& u, double factor) {
  AxisymmetricProfile out = u;
  out.g = [g = u.g, factor](double r, double c) { return factor * g(r, c); };
  out.g_r = [g = u.g_r, factor](double r, double c) { return factor * g(r, c); };
  out.g_c = [g = u.g_c, factor](double r, double c) { return factor * g(r, c); };
  if (u.g_rr) out.g_rr = [g = u.g_rr, factor](double r) { return factor * g(r); };
  out.label = fmt(factor) + "*" + u.label;
  return out;
}

AxisymmetricProfile plus_constant(const AxisymmetricProfile& u, double shift) {
  AxisymmetricProfile out = u;
  out.g = [g = u.g, shift](double r, double c) { return g(r, c) + shift; };
  out.support_radius = shift == 0.0 ? u.support_radius : std::numeric_limits<double>::infinity();
  out.label = u.label + "+" + fmt(shift);
  if (out.asymptotics && shift != 0.0) out.asymptotics.reset();
  return out;
}

AxisymmetricProfile dilated(const AxisymmetricProfile& u, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("dilation factor must be positive");
  AxisymmetricProfile out = u;
  out.g = [g = u.g, lambda](double r, double c) { return g(lambda * r, c); };
  out.g_r = [g = u.g_r, lambda](double r, double c) { return lambda * g(lambda * r, c); };
  out.g_c = [g = u.g_c, lambda](double r, double c) { return g(lambda * r, c); };
  if (u.g_rr) out.g_rr = [g = u.g_rr, lambda](double r) { return lambda * lambda * g(lambda * r); };
  out.support_radius = u.support_radius / lambda;
  for (double& k : out.kinks) k /= lambda;
  if (out.asymptotics) out.asymptotics->length /= lambda;
  out.label = u.label + "@" + fmt(lambda);
  return out;
}

AxisymmetricProfile translated(const AxisymmetricProfile& u, double t) {
  if (t == 0.0) return u;
  AxisymmetricProfile out = u;
  // x - t e has radius rho = sqrt(r^2 - 2 t r c + t^2) and cosine (r c - t)/rho.
  struct Polar {
    double rho, cp, drho_dr, drho_dc, dcp_dr, dcp_dc;
  };
  auto polar = [t](double r, double c) {
    Polar p{};
    p.rho = std::sqrt(std::max(0.0, r * r - 2.0 * t * r * c + t * t));
    if (p.rho == 0.0) return p;
    p.cp = std::clamp((r * c - t) / p.rho, -1.0, 1.0);
    p.drho_dr = (r - t * c) / p.rho;
    p.drho_dc = -t * r / p.rho;
    p.dcp_dr = (c * p.rho - (r * c - t) * p.drho_dr) / (p.rho * p.rho);
    p.dcp_dc = (r * p.rho - (r * c - t) * p.drho_dc) / (p.rho * p.rho);
    return p;
  };
  out.g = [g = u.g, polar](double r, double c) {
    const Polar p = polar(r, c);
    return p.rho == 0.0 ? g(0.0, 1.0) : g(p.rho, p.cp);
  };
  out.g_r = [u, polar](double r, double c) {
    const Polar p = polar(r, c);
    if (p.rho == 0.0) return 0.0;
    return u.g_r(p.rho, p.cp) * p.drho_dr + u.g_c(p.rho, p.cp) * p.dcp_dr;
  };
  out.g_c = [u, polar](double r, double c) {
    const Polar p = polar(r, c);
    if (p.rho == 0.0) return 0.0;
    return u.g_r(p.rho, p.cp) * p.drho_dc + u.g_c(p.rho, p.cp) * p.dcp_dc;
  };
  out.g_rr = nullptr;
  out.radial = false;
  out.support_radius = u.support_radius + std::abs(t);
  out.kinks.clear();
  out.asymptotics.reset();
  out.gradient_at_origin = u.smooth_at_origin;
  out.label = u.label + ">" + fmt(t);
  return out;
}

AxisymmetricProfile combination(const std::vector<std::pair<double, AxisymmetricProfile>>& terms) {
  if (terms.empty()) throw DomainError("combination needs at least one term");
  const AxisymmetricProfile& first = terms.front().second;
  AxisymmetricProfile out;
  out.dim = first.dim;
  out.axis = first.axis;
  // Radial terms do not care about the axis; the others must agree on it.
  for (const auto& term : terms) {
    if (!term.second.radial) {
      out.axis = term.second.axis;
      break;
    }
  }
  out.radial = true;
  out.gradient_at_origin = true;
  out.smooth_at_origin = true;
  out.support_radius = 0.0;
  bool all_rr = true;
  std::string label;
  for (const auto& [w, u] : terms) {
    if (u.dim != first.dim) throw DomainError("combination terms must share the dimension");
    if (!u.radial && (u.axis - out.axis).norm() > 1e-14) {
      throw DomainError("combination terms must share the axis");
    }
    out.radial = out.radial && u.radial;
    out.gradient_at_origin = out.gradient_at_origin && u.gradient_at_origin;
    out.smooth_at_origin = out.smooth_at_origin && u.smooth_at_origin;
    out.support_radius = std::max(out.support_radius, u.support_radius);
    out.kinks.insert(out.kinks.end(), u.kinks.begin(), u.kinks.end());
    all_rr = all_rr && static_cast<bool>(u.g_rr);
    if (!label.empty()) label += "+";
    label += fmt(w) + "*" + u.label;
  }
  auto shared = std::make_shared<const std::vector<std::pair<double, AxisymmetricProfile>>>(terms);
  out.g = [shared](double r, double c) {
    double s = 0.0;
    for (const auto& [w, u] : *shared) s += w * u.g(r, c);
    return s;
  };
  out.g_r = [shared](double r, double c) {
    double s = 0.0;
    for (const auto& [w, u] : *shared) s += w * u.g_r(r, c);
    return s;
  };
  out.g_c = [shared](double r, double c) {
    double s = 0.0;
    for (const auto& [w, u] : *shared) {
      if (!u.radial) s += w * u.g_c(r, c);
    }
    return s;
  };
  if (out.radial && all_rr) {
    out.g_rr = [shared](double r) {
      double s = 0.0;
      for (const auto& [w, u] : *shared) s += w * u.g_rr(r);
      return s;
    };
  }
  std::sort(out.kinks.begin(), out.kinks.end());
  out.kinks.erase(std::unique(out.kinks.begin(), out.kinks.end()), out.kinks.end());
  out.label = "[" + label + "]";
  return out;
}

std::vector<AxisymmetricProfile> test_suite(Dimension d, std::uint64_t seed) {
  std::vector<AxisymmetricProfile> base;
  for (double s : {0.5, 1.0, 2.0, 4.0}) base.push_back(gaussian(d, s));
  for (double R : {0.5, 1.0, 2.0, 3.0}) base.push_back(bump(d, R));
  base.push_back(r2_exp(d));
  for (double s : {0.5, 1.0, 3.0}) base.push_back(angular_gaussian(d, s));
  for (double R : {1.0, 2.5}) base.push_back(angular_bump(d, R));
  base.push_back(scaled(profile_v(d, default_axis(d)), 0.5));

  std::vector<AxisymmetricProfile> suite;
  SplitMix rng{seed};
  // Seeded amplitudes for the fixed families keep the suite seed-dependent.
  for (const auto& u : base) suite.push_back(scaled(u, rng.uniform(-3.0, 3.0)));
  for (int k = 0; k < 7; ++k) {
    std::vector<std::pair<double, AxisymmetricProfile>> terms;
    for (int j = 0; j < 5; ++j) {
      const std::size_t pick = static_cast<std::size_t>(rng.next() % base.size());
      terms.emplace_back(rng.uniform(-1.5, 1.5), base[pick]);
    }
    auto combo = combination(terms);
    combo.label = "random" + std::to_string(k) + ":" + combo.label;
    suite.push_back(std::move(combo));
  }
  return suite;
}

AxisymmetricProfile parse_profile_label(const std::string& label, Dimension d) {
  const auto colon = label.find(':');
  const std::string name = label.substr(0, colon);
  std::map<std::string, double> kv;
  if (colon != std::string::npos) {
    std::stringstream rest(label.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw DomainError("malformed profile parameter '" + item + "'");
      try {
        kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw DomainError("profile parameter '" + item + "' is not numeric");
      }
    }
  }
  auto get = [&](const std::string& key, double fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  };
  ProfileParams params;
  params.d = d;
  params.a = get("a", 0.0);
  params.sigma = get("sigma", 1.0);
  params.amp_A = get("A", 1.0);
  params.shape_B = get("B", 1.0);
  params.p = get("p", d.real());
  params.shift = get("shift", 0.0);
  params.epsilon = get("scale", 1.0);

  AxisymmetricProfile u;
  if (name == "gaussian") {
    u = gaussian(d, get("s", 1.0));
  } else if (name == "bump") {
    u = bump(d, get("R", 1.0));
  } else if (name == "r2exp") {
    u = r2_exp(d);
  } else if (name == "angular") {
    u = angular_gaussian(d, get("s", 1.0));
  } else if (name == "angular_bump") {
    u = angular_bump(d, get("R", 1.0));
  } else if (name == "linear") {
    u = linear(d);
  } else if (name == "v") {
    u = profile_v(d, default_axis(d));
  } else if (name == "Fa") {
    u = profile_F(params.a, d);
  } else if (name == "va") {
    u = profile_va(params.a, d, default_axis(d));
  } else if (name == "gn") {
    u = gn_extremal(params.p, params.a, d, params.amp_A, params.shape_B);
  } else if (name == "logsob") {
    u = logsob_extremal(params.p, d, params.sigma);
  } else {
    throw DomainError("unknown profile label '" + label + "'");
  }
  if (params.shift != 0.0) u = translated(u, params.shift);
  if (params.epsilon != 1.0) u = scaled(u, params.epsilon);
  u.label = label;
  return u;
}

}  // namespace onofri
