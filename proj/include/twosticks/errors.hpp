#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace twosticks {

// Bad arguments: dimension mismatch, non-finite coordinates, parameters out of range.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Mathematically undefined evaluation, e.g. the normal map at the origin.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A named hypothesis of an experiment does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  PreconditionError(std::string hypothesis, const std::string& detail)
      : std::invalid_argument(hypothesis + ": " + detail), hypothesis_(std::move(hypothesis)) {}

  const std::string& hypothesis() const noexcept { return hypothesis_; }

 private:
  std::string hypothesis_;
};

// A sampling estimator saw no sample with a denominator above the floor.
class DegenerateEstimate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace twosticks
