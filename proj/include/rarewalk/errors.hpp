#pragma once

#include <stdexcept>
#include <string>

namespace rarewalk {

// The conditioning threshold is so deep that the tail probability underflows
// double precision; no sample can be produced at this precision.
struct ThresholdUnreachableError : std::runtime_error {
  explicit ThresholdUnreachableError(const std::string& what)
      : std::runtime_error(what) {}
};

// A ground-truth computation refuses to run because its expected cost bound
// is exceeded (e.g. rejection sampling against a probability that is too small).
struct OracleInfeasibleError : std::runtime_error {
  explicit OracleInfeasibleError(const std::string& what)
      : std::runtime_error(what) {}
};

// The estimator's normalizing constant is zero; the model carries no mass on
// the target event at this precision.
struct DegenerateModelError : std::runtime_error {
  explicit DegenerateModelError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace rarewalk
