#pragma once

#include <stdexcept>
#include <string>

namespace onofri {

/// Inputs outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Quadrature failure, non-finite integrand values, overflow.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// The requested quantity is 0/0 or otherwise undefined for this input
/// (constant profiles, a = p in the interpolation family, zero amplitude).
class DegenerateError : public DomainError {
public:
  explicit DegenerateError(const std::string& what) : DomainError(what) {}
};

}  // namespace onofri
