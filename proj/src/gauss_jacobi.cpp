#include "onofri/gauss_jacobi.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "onofri/errors.hpp"

namespace onofri {

JacobiValue jacobi_polynomial(int n, double alpha, double beta, double x) {
  const double ab = alpha + beta;
  double p_prev = 1.0;
  if (n == 0) return {1.0, 0.0};
  double p = (alpha + 1.0) + (ab + 2.0) * (x - 1.0) * 0.5;
  for (int k = 2; k <= n; ++k) {
    const double kk = k;
    const double c = 2.0 * kk + ab;
    const double a1 = 2.0 * kk * (kk + ab) * (c - 2.0);
    const double a2 = (c - 1.0) * (c * (c - 2.0) * x + alpha * alpha - beta * beta);
    const double a3 = 2.0 * (kk + alpha - 1.0) * (kk + beta - 1.0) * c;
    const double next = (a2 * p - a3 * p_prev) / a1;
    p_prev = p;
    p = next;
  }
  // (2n+ab)(1-x^2) P_n' = n[(alpha-beta) - (2n+ab) x] P_n + 2(n+alpha)(n+beta) P_{n-1}
  const double nn = n;
  const double c = 2.0 * nn + ab;
  const double dp = (nn * ((alpha - beta) - c * x) * p + 2.0 * (nn + alpha) * (nn + beta) * p_prev) /
                    (c * (1.0 - x * x));
  return {p, dp};
}

namespace {

std::shared_ptr<const GaussRule> build_rule(int n, double alpha, double beta) {
  const double ab = alpha + beta;
  // Jacobi matrix of the monic recurrence (Golub-Welsch); only eigenvalues
  // are used, the nodes are then polished by Newton and the weights come from
  // the closed-form Christoffel numbers.
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 1));
  for (int i = 0; i < n; ++i) {
    const double c = 2.0 * i + ab;
    if (i == 0) {
      diag(i) = (beta - alpha) / (ab + 2.0);
    } else {
      diag(i) = (beta * beta - alpha * alpha) / (c * (c + 2.0));
    }
  }
  for (int i = 1; i < n; ++i) {
    const double ii = i;
    const double c = 2.0 * ii + ab;
    double b2;
    if (i == 1) {
      b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      b2 = 4.0 * ii * (ii + alpha) * (ii + beta) * (ii + ab) / (c * c * (c + 1.0) * (c - 1.0));
    }
    sub(i - 1) = std::sqrt(b2);
  }
  std::vector<double> x(n);
  if (n == 1) {
    x[0] = diag(0);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("Gauss-Jacobi eigenvalue solve failed");
    for (int i = 0; i < n; ++i) x[i] = solver.eigenvalues()(i);
  }

  const double log_const = std::lgamma(n + alpha + 1.0) + std::lgamma(n + beta + 1.0) -
                           std::lgamma(n + ab + 1.0) - std::lgamma(n + 1.0) +
                           (ab + 1.0) * std::log(2.0);
  auto rule = std::make_shared<GaussRule>();
  rule->x.resize(n);
  rule->w.resize(n);
  for (int i = 0; i < n; ++i) {
    double xi = x[i];
    const double lo = i > 0 ? x[i - 1] : -1.0;
    const double hi = i + 1 < n ? x[i + 1] : 1.0;
    for (int it = 0; it < 3; ++it) {
      const JacobiValue jv = jacobi_polynomial(n, alpha, beta, xi);
      if (jv.dp == 0.0 || !std::isfinite(jv.dp)) break;
      const double step = jv.p / jv.dp;
      const double cand = xi - step;
      if (!(cand > 0.5 * (lo + xi) && cand < 0.5 * (xi + hi))) break;
      xi = cand;
      if (std::abs(step) <= 1e-16 * (1.0 + std::abs(xi))) break;
    }
    const JacobiValue jv = jacobi_polynomial(n, alpha, beta, xi);
    rule->x[i] = xi;
    rule->w[i] = std::exp(log_const) / ((1.0 - xi * xi) * jv.dp * jv.dp);
  }
  return rule;
}

}  // namespace

std::shared_ptr<const GaussRule> gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw DomainError("Gauss rule needs at least one node");
  if (!(alpha > -1.0) || !(beta > -1.0)) throw DomainError("Jacobi exponents must exceed -1");
  static std::mutex mutex;
  static std::map<std::tuple<int, double, double>, std::shared_ptr<const GaussRule>> cache;
  const auto key = std::make_tuple(n, alpha, beta);
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto rule = build_rule(n, alpha, beta);
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(key, std::move(rule)).first->second;
}

}  // namespace onofri
