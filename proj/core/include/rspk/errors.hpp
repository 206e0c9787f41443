// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rspk {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function or operating region.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment or model configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown (singular iterate, invalid weight denominator, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver did not reach its tolerance.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : NumericalError(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Malformed snapshot or matrix file.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::uint64_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

}  // namespace rspk
