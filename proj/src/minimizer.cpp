#include "onofri/minimizer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include "onofri/errors.hpp"
#include "onofri/forms.hpp"
#include "onofri/functionals.hpp"
#include "onofri/parallel.hpp"

namespace onofri {

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct BasisEval {
  double value, radial, perp;  // perp: coefficient of (e - c xhat)/|e - c xhat|
};

BasisEval basis_eval(const BasisSpec& basis, std::size_t j, double r, double c) {
  const std::size_t nc = basis.radial_centers.size();
  const int order = basis.angular_orders[j / nc];
  const double center = basis.radial_centers[j % nc];
  const double width = basis.radial_widths[j % nc];
  const double t = (r - center) / width;
  const double ring = std::exp(-t * t);
  const double ring_r = -2.0 * t / width * ring;
  if (order == 0) return {ring, ring_r, 0.0};
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  return {r / center * c * ring, c * (ring + r * ring_r) / center, ring / center * s};
}

std::vector<double> std_vec(const Vec& v) { return {v.data(), v.data() + v.size()}; }

Vec eigen_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

// Basis values and gradients tabulated on one fixed grid.
class QuotientObjective {
public:
  QuotientObjective(const BasisSpec& basis, const QuadratureSpec& spec, int level) : d_(basis.d) {
    basis.validate();
    const AxisymGrid g = axisym_grid(spec, d_, level, RadialDomain{});
    const auto n = static_cast<Eigen::Index>(g.size());
    const auto m = static_cast<Eigen::Index>(basis.count());
    r_ = g.r;
    w_ = eigen_vec(g.w);
    wmu_.resize(n);
    val_.resize(n, m);
    rad_.resize(n, m);
    perp_.resize(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
      wmu_[i] = g.w[i] * mu_density_radial(d_, g.r[i]);
      for (Eigen::Index j = 0; j < m; ++j) {
        const BasisEval b = basis_eval(basis, static_cast<std::size_t>(j), g.r[i], g.c[i]);
        val_(i, j) = b.value;
        rad_(i, j) = b.radial;
        perp_(i, j) = b.perp;
      }
    }
    mass_ = wmu_.sum();
    means_ = (val_.transpose() * wmu_) / mass_;
    const Mat centered = val_.rowwise() - means_.transpose();
    gram_ = centered.transpose() * wmu_.asDiagonal() * centered / mass_;
  }

  double operator()(const Vec& c) const {
    if (!c.allFinite()) return std::numeric_limits<double>::infinity();
    const Vec u = val_ * c;
    const Vec gr = rad_ * c;
    const Vec gp = perp_ * c;
    const double mean = wmu_.dot(u) / mass_;
    const std::vector<double> uv = std_vec(u);
    const std::vector<double> wv = std_vec(wmu_);
    const double lhs = centered_log_mean_exp(uv, wv, mass_, mean);
    if (!(lhs > 0.0)) return std::numeric_limits<double>::infinity();
    double rhs = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      rhs += w_[i] * integrand_H_polar(d_, r_[static_cast<std::size_t>(i)], gr[i], gp[i] * gp[i]);
    }
    const double q = rhs / lhs;
    return std::isfinite(q) ? q : std::numeric_limits<double>::infinity();
  }

  double norm(const Vec& c) const { return std::sqrt(std::max(0.0, c.dot(gram_ * c))); }
  const Mat& gram() const { return gram_; }

private:
  Dimension d_;
  std::vector<double> r_;
  Vec w_, wmu_, means_;
  Mat val_, rad_, perp_, gram_;
  double mass_ = 0.0;
};

struct Descent {
  Vec x;
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  std::vector<double> trace;
  bool converged = false;
};

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x) {
  Vec g(x.size());
  Vec xp = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = 1e-5 * (1.0 + std::abs(x[j]));
    xp[j] = x[j] + h;
    const double fp = f(xp);
    xp[j] = x[j] - h;
    const double fm = f(xp);
    xp[j] = x[j];
    g[j] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Descent bfgs(const std::function<double(const Vec&)>& f, Vec x, int max_iterations, double grad_tol) {
  Descent out;
  const auto m = x.size();
  double fx = f(x);
  if (!std::isfinite(fx)) throw DegenerateError("objective is not finite at the starting point");
  Vec g = fd_gradient(f, x);
  Mat H = Mat::Identity(m, m);
  bool scaled_initial = false;
  out.trace.push_back(fx);
  int stalls = 0;
  for (int it = 0; it < max_iterations; ++it) {
    out.iterations = it;
    if (!g.allFinite()) break;
    if (g.norm() <= grad_tol) {
      out.converged = true;
      break;
    }
    Vec p = -H * g;
    double slope = g.dot(p);
    if (!(slope < 0.0)) {
      H.setIdentity();
      p = -g;
      slope = -g.squaredNorm();
    }
    if (!scaled_initial) {
      // Until the curvature scale is known, move at most 10% of the current norm.
      const double cap = 0.1 * std::max(x.norm(), 1e-3);
      if (p.norm() > cap) {
        p *= cap / p.norm();
        slope = g.dot(p);
      }
    }
    double t = 1.0;
    double f_new = f(x + t * p);
    int halvings = 0;
    while (!(f_new <= fx + 1e-4 * t * slope) && halvings < 50) {
      t *= 0.5;
      f_new = f(x + t * p);
      ++halvings;
    }
    if (!(f_new <= fx + 1e-4 * t * slope)) break;  // line search failed: not converged
    const Vec s = t * p;
    x += s;
    const Vec g_new = fd_gradient(f, x);
    const Vec y = g_new - g;
    const double ys = y.dot(s);
    if (ys > 1e-300) {
      if (!scaled_initial) {
        H *= ys / y.squaredNorm();
        scaled_initial = true;
      }
      const double rho = 1.0 / ys;
      const Mat I = Mat::Identity(m, m);
      H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) + rho * s * s.transpose();
    }
    const double decrease = fx - f_new;
    fx = f_new;
    g = g_new;
    out.trace.push_back(fx);
    out.iterations = it + 1;
    stalls = decrease <= 1e-14 * std::abs(fx) ? stalls + 1 : 0;
    if (stalls >= 3) {
      out.converged = true;
      break;
    }
  }
  out.x = x;
  out.value = fx;
  out.grad_norm = g.norm();
  if (out.grad_norm <= grad_tol) out.converged = true;
  return out;
}

std::vector<Vec> random_starts(std::size_t m, int count, std::uint64_t seed, double norm) {
  std::mt19937_64 gen(seed);
  std::vector<Vec> starts;
  for (int k = 0; k < count; ++k) {
    Vec z(static_cast<Eigen::Index>(m));
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      z[j] = 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53 - 1.0;
    }
    starts.push_back(z * (norm / z.norm()));
  }
  return starts;
}

// Runs bfgs from each start concurrently; best value wins, ties go to the smaller coefficient norm.
Descent best_descent(const std::function<double(const Vec&)>& f, const std::vector<Vec>& starts,
                     const MinimizeOptions& options) {
  std::vector<Descent> runs(starts.size());
  parallel_for(starts.size(), [&](std::size_t k) {
    runs[k] = bfgs(f, starts[k], options.max_iterations, options.grad_tol);
  });
  std::size_t best = 0;
  for (std::size_t k = 1; k < runs.size(); ++k) {
    const double tie = 1e-12 * std::abs(runs[best].value);
    if (runs[k].value < runs[best].value - tie ||
        (std::abs(runs[k].value - runs[best].value) <= tie && runs[k].x.norm() < runs[best].x.norm())) {
      best = k;
    }
  }
  return runs[best];
}

}  // namespace

void BasisSpec::validate() const {
  if (radial_centers.empty()) throw DomainError("basis needs at least one radial center");
  if (radial_widths.size() != radial_centers.size()) throw DomainError("one width per center is required");
  for (std::size_t k = 0; k < radial_centers.size(); ++k) {
    if (!(radial_centers[k] > 0.0)) throw DomainError("radial centers must be positive");
    if (!(radial_widths[k] > 0.0)) throw DomainError("radial widths must be positive");
  }
  if (angular_orders.empty()) throw DomainError("basis needs at least one angular order");
  for (int o : angular_orders) {
    if (o != 0 && o != 1) throw DomainError("angular orders must be 0 or 1");
  }
}

BasisSpec geometric_basis(Dimension d, std::vector<int> angular_orders, int centers, double first, double ratio,
                          double width_factor) {
  BasisSpec b;
  b.d = d;
  b.angular_orders = std::move(angular_orders);
  double c = first;
  for (int k = 0; k < centers; ++k, c *= ratio) {
    b.radial_centers.push_back(c);
    b.radial_widths.push_back(width_factor * c);
  }
  b.validate();
  return b;
}

AxisymmetricProfile assemble(const BasisSpec& basis, const std::vector<double>& coeffs, const QuadratureSpec& spec) {
  basis.validate();
  if (coeffs.size() != basis.count()) throw DomainError("coefficient count does not match the basis");
  const std::size_t nc = basis.radial_centers.size();
  // Order-1 members are odd in c and have zero mean; order-0 means need quadrature.
  double mean = 0.0;
  bool radial = true;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (coeffs[j] == 0.0) continue;
    if (basis.angular_orders[j / nc] == 1) {
      radial = false;
      continue;
    }
    const IntegralResult mj = integrate_radial(
        [&](double r) { return basis_eval(basis, j, r, 1.0).value * mu_density_radial(basis.d, r); }, basis.d,
        spec);
    mean += coeffs[j] * mj.value;
  }
  auto shared = std::make_shared<const std::pair<BasisSpec, std::vector<double>>>(basis, coeffs);
  AxisymmetricProfile u;
  u.dim = basis.d;
  u.axis = PointVec::basis(static_cast<std::size_t>(basis.d.value()), 0);
  u.label = "basis[" + std::to_string(coeffs.size()) + "]";
  u.radial = radial;
  u.gradient_at_origin = true;
  u.smooth_at_origin = true;
  u.g = [shared, mean](double r, double c) {
    double s = -mean;
    for (std::size_t j = 0; j < shared->second.size(); ++j) {
      if (shared->second[j] != 0.0) s += shared->second[j] * basis_eval(shared->first, j, r, c).value;
    }
    return s;
  };
  u.g_r = [shared](double r, double c) {
    double s = 0.0;
    for (std::size_t j = 0; j < shared->second.size(); ++j) {
      if (shared->second[j] != 0.0) s += shared->second[j] * basis_eval(shared->first, j, r, c).radial;
    }
    return s;
  };
  u.g_c = [shared](double r, double) {
    // Only order-1 members depend on c: d/dc [(r/center) c ring] = (r/center) ring.
    const std::size_t nc2 = shared->first.radial_centers.size();
    double s = 0.0;
    for (std::size_t j = 0; j < shared->second.size(); ++j) {
      if (shared->second[j] == 0.0 || shared->first.angular_orders[j / nc2] != 1) continue;
      const BasisEval b = basis_eval(shared->first, j, r, 0.0);
      s += shared->second[j] * b.perp * r;
    }
    return s;
  };
  return u;
}

std::vector<double> fit_to_profile(const BasisSpec& basis, const AxisymmetricProfile& target,
                                   const QuadratureSpec& spec) {
  basis.validate();
  if (target.dim != basis.d) throw DomainError("target lives in a different dimension");
  const AxisymGrid g = axisym_grid(spec, basis.d, 2, RadialDomain{});
  const auto n = static_cast<Eigen::Index>(g.size());
  const auto m = static_cast<Eigen::Index>(basis.count());
  Mat A(n, m);
  Vec t(n), wmu(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    wmu[i] = g.w[i] * mu_density_radial(basis.d, g.r[i]);
    t[i] = target.g(g.r[i], g.c[i]);
    for (Eigen::Index j = 0; j < m; ++j) A(i, j) = basis_eval(basis, static_cast<std::size_t>(j), g.r[i], g.c[i]).value;
  }
  const double mass = wmu.sum();
  const Vec means = A.transpose() * wmu / mass;
  const double tmean = wmu.dot(t) / mass;
  const Vec sw = wmu.cwiseSqrt();
  const Mat design = sw.asDiagonal() * (A.rowwise() - means.transpose());
  const Vec rhs = sw.asDiagonal() * (t.array() - tmean).matrix();
  return std_vec(design.colPivHouseholderQr().solve(rhs));
}

MinimizationResult minimize_quotient(const BasisSpec& basis, const std::vector<double>& init,
                                     const MinimizeOptions& options) {
  basis.validate();
  if (init.size() != basis.count()) throw DomainError("initial coefficients do not match the basis");
  const Vec x0 = eigen_vec(init);
  if (x0.norm() == 0.0) throw DegenerateError("all-zero initial coefficients give a 0/0 quotient");
  const auto objective = std::make_shared<QuotientObjective>(basis, options.spec, options.grid_level);
  const std::function<double(const Vec&)> f = [objective](const Vec& c) { return (*objective)(c); };
  std::vector<Vec> starts{x0};
  for (const Vec& z : random_starts(basis.count(), std::max(0, options.restarts - 1), options.seed, x0.norm())) {
    starts.push_back(z);
  }
  const Descent best = best_descent(f, starts, options);
  MinimizationResult out;
  out.coefficients = std_vec(best.x);
  out.grad_norm = best.grad_norm;
  out.iterations = best.iterations;
  out.trace = best.trace;
  out.converged = best.converged;
  const FunctionalReport rep = onofri_report(assemble(basis, out.coefficients, options.spec), basis.d, options.spec);
  out.value = rep.quotient;
  out.tolerance = rep.lhs > 0.0 ? rep.quad_error / (onofri_alpha(basis.d) * rep.lhs) : 0.0;
  return out;
}

std::vector<NormScanRow> scan_norms(const BasisSpec& basis, const std::vector<double>& norm_grid,
                                    const MinimizeOptions& options) {
  basis.validate();
  if (norm_grid.empty()) throw DomainError("norm grid must not be empty");
  for (std::size_t k = 0; k < norm_grid.size(); ++k) {
    if (!(norm_grid[k] > 0.0)) throw DomainError("norm grid values must be positive");
    if (k > 0 && !(norm_grid[k] < norm_grid[k - 1])) throw DomainError("norm grid must be decreasing");
  }
  const auto objective = std::make_shared<QuotientObjective>(basis, options.spec, options.grid_level);
  if (objective->gram().diagonal().maxCoeff() <= 0.0) {
    throw DomainError("the basis spans only constants; the norm constraint is infeasible");
  }
  std::vector<NormScanRow> rows;
  std::vector<Vec> starts = random_starts(basis.count(), std::max(1, options.restarts), options.seed, 1.0);
  for (double s : norm_grid) {
    // The sphere is parametrised by direction: c = s z / ||z||.
    const std::function<double(const Vec&)> f = [objective, s](const Vec& z) {
      const double nz = objective->norm(z);
      if (!(nz > 0.0)) return std::numeric_limits<double>::infinity();
      return (*objective)(z * (s / nz));
    };
    std::erase_if(starts, [&](const Vec& z) { return !(objective->norm(z) > 0.0); });
    if (starts.empty()) throw DomainError("no start direction has positive norm");
    const Descent best = best_descent(f, starts, options);
    const Vec z = best.x / objective->norm(best.x);
    NormScanRow row;
    row.norm = s;
    row.coefficients = std_vec(z * s);
    row.iterations = best.iterations;
    row.value = onofri_report(assemble(basis, row.coefficients, options.spec), basis.d, options.spec).quotient;
    rows.push_back(std::move(row));
    starts = {z};
  }
  return rows;
}

}  // namespace onofri
