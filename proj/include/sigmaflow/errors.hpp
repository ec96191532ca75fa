#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sigmaflow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input: expression syntax, spec files, CLI arguments.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : InputError(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Evaluation left the domain of a function (log of a non-positive value,
// division by zero, non-finite result).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Geometric precondition failed: non positive-definite metric, point outside
// the chart, unsupported dimension.
class GeometryError : public Error {
 public:
  using Error::Error;
};

// sigma_k * sigma_l <= 0 where a log-quotient was required.
class ConeViolation : public GeometryError {
 public:
  ConeViolation(const std::string& what, double sigma_k, double sigma_l)
      : GeometryError(what), sigma_k_(sigma_k), sigma_l_(sigma_l) {}
  double sigma_k() const { return sigma_k_; }
  double sigma_l() const { return sigma_l_; }

 private:
  double sigma_k_;
  double sigma_l_;
};

}  // namespace sigmaflow
