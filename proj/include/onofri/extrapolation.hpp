#pragma once

#include <span>

namespace onofri {

struct Extrapolated {
  double value = 0.0;
  /// Difference between the two highest-order estimates.
  double error_estimate = 0.0;
};

/// Polynomial (Neville) extrapolation of y(h) to h = 0. Needs at least two
/// distinct abscissae.
Extrapolated extrapolate_to_zero(std::span<const double> h, std::span<const double> y);

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double correlation = 0.0;
};

/// Least-squares line through (log x_i, log |y_i|).
LogLogFit loglog_fit(std::span<const double> x, std::span<const double> y);

}  // namespace onofri
