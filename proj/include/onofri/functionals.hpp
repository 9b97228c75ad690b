#pragma once

#include <optional>
#include <vector>

#include "onofri/constants.hpp"
#include "onofri/forms.hpp"
#include "onofri/profiles.hpp"
#include "onofri/quadrature.hpp"

namespace onofri {

enum class QuotientStatus { finite, infinite, undefined };

/// Onofri-type evaluation. For the Onofri inequality
///   lhs = log int e^u dmu_d - int u dmu_d,  rhs = int H_d(x, grad u) dx,
/// and for the Poincare form lhs = int |v - vbar|^2 dmu_d, rhs = int G_d(x, grad v) dx.
/// deficit = alpha_d rhs - lhs in both cases.
struct FunctionalReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double deficit = 0.0;
  double quotient = 0.0;
  QuotientStatus quotient_status = QuotientStatus::undefined;
  double mean_u = 0.0;
  double quad_error = 0.0;
  long nodes_used = 0;
  bool converged = false;
};

/// e^w - 1 - w without cancellation for small |w|.
double exp_minus_linear(double w);

/// log(sum_i wmu_i e^{val_i - mean} / mass) for weights wmu of a measure with
/// total mass `mass` and mean = sum wmu val / mass. Returns exactly 0 when val
/// is constant to rounding; otherwise it is positive, and large values are
/// handled by shifting with max(val).
double centered_log_mean_exp(const std::vector<double>& val, const std::vector<double>& wmu, double mass,
                             double mean);

/// int |u|^q dx, or int |grad u|^q dx when `gradient` is set. Radial profiles
/// with known asymptotics go through the power transform.
IntegralResult power_integral(const AxisymmetricProfile& u, Dimension d, const QuadratureSpec& spec, double q,
                              bool gradient);

FunctionalReport onofri_report(const AxisymmetricProfile& u, Dimension d, const QuadratureSpec& spec = {});
FunctionalReport poincare_report(const AxisymmetricProfile& v, Dimension d, const QuadratureSpec& spec = {});

/// Onofri reports for many profiles, evaluated concurrently. Output order matches input.
std::vector<FunctionalReport> onofri_reports(const std::vector<AxisymmetricProfile>& profiles, Dimension d,
                                             const QuadratureSpec& spec = {});

struct LinearizationRow {
  double epsilon = 0.0;
  double lhs_ratio = 0.0;  // 2 eps^{-2} lhs(eps u) / poincare lhs(u)
  double rhs_ratio = 0.0;  // 2 eps^{-2} rhs(eps u) / poincare rhs(u)
};

struct LinearizationTable {
  std::vector<LinearizationRow> rows;
  double poincare_lhs = 0.0;
  double poincare_rhs = 0.0;
  double lhs_limit = 0.0;  // extrapolated to eps = 0
  double rhs_limit = 0.0;
};

LinearizationTable linearization_check(const AxisymmetricProfile& u, Dimension d, const std::vector<double>& eps_grid,
                                       const QuadratureSpec& spec = {});

struct GNReport {
  GNExponents exponents;
  double norm_b = 0.0;
  double grad_norm_p = 0.0;
  double norm_a = 0.0;
  /// ||f||_b / (||grad f||_p^theta ||f||_a^{1-theta}) for a > p, and
  /// ||f||_a / (||grad f||_p^theta ||f||_b^{1-theta}) for a < p.
  double quotient = 0.0;
  double constant = 0.0;
  double quad_error = 0.0;  // relative
  bool converged = false;
};

GNReport gn_report(const AxisymmetricProfile& f, double p, double a, Dimension d, const QuadratureSpec& spec = {});

/// Quotient at the extremal with A = 1 and |B| = 1.
double gn_constant(double p, double a, Dimension d, const QuadratureSpec& spec = {});

struct LogSobolevReport {
  double norm_p = 0.0;        // int |u|^p dx
  double entropy = 0.0;       // int |u|^p log |u|^p dx
  double grad_integral = 0.0; // int |grad u|^p dx
  double rhs = 0.0;           // (d/p) log(beta int |grad u|^p)
  double deficit = 0.0;       // rhs - entropy
  double beta = 0.0;
  double quad_error = 0.0;
  bool converged = false;
};

/// Requires int |u|^p = 1 to 1e-8.
LogSobolevReport logsob_report(const AxisymmetricProfile& u, double p, Dimension d, const QuadratureSpec& spec = {},
                               PiExponent pi_exponent = PiExponent::half_p);

/// Rescales u so that int |u|^p dx = 1.
AxisymmetricProfile normalized_lp(const AxisymmetricProfile& u, double p, Dimension d, const QuadratureSpec& spec = {});

/// u - m psi with psi a radial bump covering the support of u (radius 1 if
/// u is not compactly supported) and m chosen so that int (u - m psi) dmu_d = 0.
/// Unlike subtracting the mean, this keeps u compactly supported.
AxisymmetricProfile mean_zero(const AxisymmetricProfile& u, Dimension d, const QuadratureSpec& spec = {});

struct RateFit {
  double slope = 0.0;
  double correlation = 0.0;
};

struct LimitLabReport {
  std::vector<double> a_grid;
  std::vector<double> ratio_i;    // int f_a^b / int F_a^b
  std::vector<double> ratio_ii;   // int f_a^a / int F_a^a
  std::vector<double> ratio_iii;  // (int |grad f_a|^d / int |grad F_a|^d)^{(a-d)/(d(d-1))}
  double target_i = 0.0;          // int e^u dmu_d
  double target_ii = 1.0;
  double target_iii = 0.0;        // exp(alpha_d int H_d(x, grad u) dx)
  double onofri_rhs = 0.0;
  RateFit rate_i, rate_ii, rate_iii;
  /// Slope of the slowest-converging ratio; -1 means O(1/a).
  double fitted_rate = 0.0;
};

std::vector<double> default_a_grid();

/// u is replaced by mean_zero(u) before f_a = F_a (1 + (d-1) u / (d a)) is formed.
LimitLabReport limit_lab(const AxisymmetricProfile& u, Dimension d, const std::vector<double>& a_grid = default_a_grid(),
                         const QuadratureSpec& spec = {});

struct QuotientExtrapolation {
  std::vector<double> eps;
  std::vector<double> quotients;  // (Q[eps v] + Q[-eps v]) / 2
  double value = 0.0;
  double error_estimate = 0.0;
};

std::vector<double> default_eps_grid();

QuotientExtrapolation quotient_extrapolation(const AxisymmetricProfile& v, Dimension d,
                                             const std::vector<double>& eps_grid = default_eps_grid(),
                                             const QuadratureSpec& spec = {});

/// Three members of the second-variation identity at finite a, with
///   b = d(a-1)/(d-1), v_a = e . grad log F_a:
///   term_lhs  = b(b-1) int F^b v_a^2 / int F^b,
///   term_grad = (a-d)/(d(d-1)) int Q_d(grad F, grad(F v_a)) / int |grad F|^d,
///   term_a    = a(a-1) int F^a v_a^2 / int F^a.
struct SecondVariationEval {
  double a = 0.0;
  double term_lhs = 0.0;
  double term_grad = 0.0;
  double term_a = 0.0;
  double residual = 0.0;  // term_lhs - term_grad - term_a
  double scale = 0.0;     // max of the three terms
  double quad_error = 0.0;
};

SecondVariationEval second_variation(double a, Dimension d, const PointVec& e, const QuadratureSpec& spec = {});

struct EigenCheck {
  double rayleigh = 0.0;  // alpha_d int G_d(x, grad v) dx / int v^2 dmu_d
  double lambda1_reference = 1.0;
  double relative_gap = 0.0;
  std::optional<double> dirichlet_ratio;  // d = 2: int |grad v|^2 dx / int v^2 dmu_2
  std::optional<double> dirichlet_reference;
  double quad_error = 0.0;
};

EigenCheck rayleigh_check(Dimension d, const QuadratureSpec& spec = {});

/// d = 2 endpoint of the Gagliardo-Nirenberg family. With f_q = F (1 + u/(2q)),
/// F = (1+|x|^2)^{-1/(q-1)} and u replaced by mean_zero(u), `values[i]` is
///   [C_{2,q+1} ||grad f||_2^{(q-1)/(2q)} ||f||_{q+1}^{(q+1)/(2q)} / ||f||_{2q}]^{2q}
/// at q = q_grid[i]; `target` is e^{int |grad u|^2/(16 pi)} / int e^u dmu_2.
struct OnofriGNDisplay {
  std::vector<double> q_grid;
  std::vector<double> values;
  double target = 0.0;
  double extrapolated = 0.0;
};

OnofriGNDisplay onofri_gn_display(const AxisymmetricProfile& u, const std::vector<double>& q_grid,
                                  const QuadratureSpec& spec = {});

}  // namespace onofri
