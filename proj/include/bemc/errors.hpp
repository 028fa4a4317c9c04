#pragma once

#include <stdexcept>
#include <string>

namespace bemc {

// Parameter outside its declared domain (bad theta, alpha outside A, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Requested moment order is not integrable for the innovation law.
class MomentOrderError : public DomainError {
 public:
  explicit MomentOrderError(const std::string& what) : DomainError(what) {}
};

// Data that makes an estimator undefined (e.g. an all-zero path).
class DegenerateDataError : public std::runtime_error {
 public:
  explicit DegenerateDataError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failures: non-finite criterion values, quadrature breakdown, ...
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Power iteration failed to converge: t is outside the perturbation regime.
class GapFailureError : public NumericalError {
 public:
  explicit GapFailureError(const std::string& what) : NumericalError(what) {}
};

// Too many replications needed the degenerate-data fallback.
class DataQualityError : public std::runtime_error {
 public:
  explicit DataQualityError(const std::string& what) : std::runtime_error(what) {}
};

// Config file problems, with line/key diagnostics in the message.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bemc
