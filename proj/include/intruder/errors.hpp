#pragma once

#include <stdexcept>

namespace intruder {

/// Invalid model parameters, configuration documents or input data.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to produce a usable result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace intruder
