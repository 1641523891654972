#pragma once

#include <stdexcept>
#include <string>

namespace tempertail {

/// A parameter or argument violates a documented range. The message names the
/// violated constraint, e.g. "sibuya: gamma must lie in (0,1]".
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested (model, transform kind) pair has no evaluator.
class UnsupportedTransform : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// temper() was asked for a (base model, tempering spec) pair outside the table.
class IncompatibleTempering : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A sampler hit a guardrail (step cap, refused rejection loop).
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tempertail
