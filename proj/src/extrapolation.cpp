#include "onofri/extrapolation.hpp"

#include <cmath>
#include <vector>

#include "onofri/errors.hpp"

namespace onofri {

Extrapolated extrapolate_to_zero(std::span<const double> h, std::span<const double> y) {
  const std::size_t n = h.size();
  if (n != y.size()) throw DomainError("extrapolation needs matching abscissae and values");
  if (n < 2) throw DomainError("extrapolation needs at least two points");
  // Neville tableau evaluated at h = 0; p[i] holds the estimate from h_i..h_{i+k}.
  std::vector<double> p(y.begin(), y.end());
  double previous_top = p[n - 1];
  for (std::size_t k = 1; k < n; ++k) {
    previous_top = p[n - k];
    for (std::size_t i = 0; i + k < n; ++i) {
      const double den = h[i] - h[i + k];
      if (den == 0.0) throw DomainError("extrapolation abscissae must be distinct");
      p[i] = (h[i] * p[i + 1] - h[i + k] * p[i]) / den;
    }
  }
  // previous_top is the estimate that leaves out the first (coarsest) point.
  Extrapolated out;
  out.value = p[0];
  out.error_estimate = std::abs(p[0] - previous_top);
  return out;
}

LogLogFit loglog_fit(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw DomainError("log-log fit needs at least two matching points");
  double sx = 0.0, sy = 0.0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || y[i] == 0.0) throw DomainError("log-log fit needs positive x and nonzero y");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(std::abs(y[i]));
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    syy += (ly[i] - my) * (ly[i] - my);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw DomainError("log-log fit needs distinct x values");
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.correlation = syy == 0.0 ? 1.0 : sxy / std::sqrt(sxx * syy);
  return fit;
}

}  // namespace onofri
