#pragma once

#include <cstdint>
#include <vector>

#include "onofri/constants.hpp"
#include "onofri/profiles.hpp"
#include "onofri/quadrature.hpp"

namespace onofri {

/// Basis of Gaussian rings exp(-(r - center)^2 / width^2). Angular order 0
/// uses the ring itself; order 1 multiplies it by (x.e)/center = (r/center) c,
/// which keeps the function smooth at the origin.
struct BasisSpec {
  Dimension d{2};
  std::vector<double> radial_centers;
  std::vector<double> radial_widths;
  std::vector<int> angular_orders;

  std::size_t count() const { return radial_centers.size() * angular_orders.size(); }
  void validate() const;
};

/// Geometric centers c_k = first * ratio^k, widths proportional to the centers.
BasisSpec geometric_basis(Dimension d, std::vector<int> angular_orders, int centers = 12, double first = 0.1,
                          double ratio = 1.6, double width_factor = 1.2);

/// u = sum c_i phi_i minus its mean against mu_d. Coefficients are ordered by
/// angular order first, then by center.
AxisymmetricProfile assemble(const BasisSpec& basis, const std::vector<double>& coeffs,
                             const QuadratureSpec& spec = {});

/// Least-squares fit of `target` in L^2(mu_d) by the (mean-free) basis.
std::vector<double> fit_to_profile(const BasisSpec& basis, const AxisymmetricProfile& target,
                                   const QuadratureSpec& spec = {});

struct MinimizeOptions {
  int max_iterations = 150;
  double grad_tol = 1e-7;
  int restarts = 5;
  std::uint64_t seed = 1;
  /// Refinement level of the fixed grid used during descent.
  int grid_level = 2;
  QuadratureSpec spec{};
};

struct MinimizationResult {
  std::vector<double> coefficients;
  /// Quotient of assemble(coefficients), recomputed by onofri_report.
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  std::vector<double> trace;
  bool converged = false;
  /// Total tolerance attached to `value` (quadrature error of the final report).
  double tolerance = 0.0;
};

/// BFGS descent on coeffs -> Q_d[assemble(coeffs)] with central-difference
/// gradients and Armijo backtracking. Restart 0 starts from `init`; the other
/// restarts start from seeded random vectors with the same Euclidean norm.
MinimizationResult minimize_quotient(const BasisSpec& basis, const std::vector<double>& init,
                                     const MinimizeOptions& options = {});

struct NormScanRow {
  double norm = 0.0;  // ||u||_{L^2(mu_d)}
  double value = 0.0; // smallest quotient found on that sphere
  std::vector<double> coefficients;
  int iterations = 0;
};

/// For each s in a positive decreasing grid, minimizes Q_d over the sphere
/// ||u||_{L^2(mu_d)} = s, warm-starting from the previous direction.
std::vector<NormScanRow> scan_norms(const BasisSpec& basis, const std::vector<double>& norm_grid,
                                    const MinimizeOptions& options = {});

}  // namespace onofri
