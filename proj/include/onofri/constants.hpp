#pragma once

#include <optional>

namespace onofri {

/// Ambient dimension of R^d. Only integers d >= 2 are meaningful here.
class Dimension {
public:
  explicit Dimension(int d);
  int value() const { return d_; }
  double real() const { return static_cast<double>(d_); }
  /// d/(d-1), the exponent of |x| inside the measure density.
  double conjugate() const { return real() / (real() - 1.0); }
  friend bool operator==(Dimension, Dimension) = default;

private:
  int d_;
};

enum class GNRegime { a_above_p, a_below_p, degenerate };

/// Exponent bookkeeping for the Gagliardo-Nirenberg family at fixed (p, a, d).
struct GNExponents {
  double p = 0.0;
  double a = 0.0;
  double b = 0.0;
  std::optional<double> theta;  // empty when a == p
  GNRegime regime = GNRegime::degenerate;
};

struct SharpConstants {
  double alpha_d = 0.0;
  double beta_pd = 0.0;
  double sphere_area = 0.0;
  double one_over_alpha = 0.0;
};

/// Which power of pi appears in the log-Sobolev constant. `half_p` is the
/// reading that produces equality at the Gaussian-type extremal; `half_d` is
/// kept only so the two can be compared numerically.
enum class PiExponent { half_p, half_d };

enum class MomentKind { grad_d, pow_a, pow_b };

double log_gamma(double x);
double gamma_fn(double x);
double beta_fn(double x, double y);
double log_beta(double x, double y);

/// |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2).
double sphere_area(Dimension d);

/// Sharp Onofri constant d^{1-d} Gamma(d/2) / (2 (d-1) pi^{d/2}).
double onofri_alpha(Dimension d);

/// Sharp constant of the L^p logarithmic Sobolev inequality, 1 < p <= d.
double logsob_beta(double p, Dimension d, PiExponent pi_exponent = PiExponent::half_p);

GNExponents gn_exponents(double p, double a, Dimension d);

/// Largest admissible a for p < d (the Sobolev endpoint); +inf when p == d.
double gn_a_max(double p, Dimension d);

SharpConstants sharp_constants(Dimension d, double p);

/// Exact moments of F_a(x) = (1 + |x|^{d/(d-1)})^{-(d-1)/(a-d)}:
///   grad_d: int |grad F_a|^d dx,  pow_a: int F_a^a dx,
///   pow_b:  int F_a^{d(a-1)/(d-1)} dx.
/// Requires a > d.
double fa_moment_closed(double a, Dimension d, MomentKind kind);

/// Leading large-a behaviour of the moments above:
///   grad_d ~ 2 d^{d-2} pi^{d/2} / Gamma(d/2) a^{1-d},
///   pow_a  ~ 2 a pi^{d/2} / (d^2 Gamma(d/2)),
///   pow_b  -> |S^{d-1}| / d.
double fa_moment_asymptotic(double a, Dimension d, MomentKind kind);

/// Closed-form best constant S_d in ||f||_{2d/(d-2)} <= S_d ||grad f||_2, d >= 3.
double aubin_talenti_constant(Dimension d);

}  // namespace onofri
