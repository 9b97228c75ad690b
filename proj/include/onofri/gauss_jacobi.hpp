#pragma once

#include <memory>
#include <vector>

namespace onofri {

/// Nodes and weights of an n-point Gauss rule on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

/// Gauss-Jacobi rule for the weight (1 - x)^alpha (1 + x)^beta, alpha, beta > -1.
/// Rules are cached; the returned object is immutable and shared.
std::shared_ptr<const GaussRule> gauss_jacobi(int n, double alpha, double beta);

inline std::shared_ptr<const GaussRule> gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

/// Jacobi polynomial P_n^{(alpha,beta)}(x) and its derivative, by recurrence.
struct JacobiValue {
  double p = 0.0;
  double dp = 0.0;
};
JacobiValue jacobi_polynomial(int n, double alpha, double beta, double x);

}  // namespace onofri
