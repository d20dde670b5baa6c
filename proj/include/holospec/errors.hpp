#pragma once

#include <stdexcept>
#include <string>

namespace holospec {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input outside the supported class (CLI exit code 3).
struct UnsupportedInput : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct IrrationalEigenvalue : UnsupportedInput {
  using UnsupportedInput::UnsupportedInput;
};

struct IrregularSingularity : UnsupportedInput {
  using UnsupportedInput::UnsupportedInput;
};

struct RamificationRequired : UnsupportedInput {
  using UnsupportedInput::UnsupportedInput;
};

struct NonRegularAtInfinity : UnsupportedInput {
  using UnsupportedInput::UnsupportedInput;
};

struct ApparentSingularityResidue : UnsupportedInput {
  using UnsupportedInput::UnsupportedInput;
};

struct HypothesisViolation : UnsupportedInput {
  using UnsupportedInput::UnsupportedInput;
};

struct WindowTooSmall : Error {
  using Error::Error;
};

struct TruncationInstability : Error {
  using Error::Error;
};

struct NoSolutionFound : Error {
  using Error::Error;
};

struct NonHermitian : Error {
  using Error::Error;
};

struct SegmentThroughZero : Error {
  using Error::Error;
};

struct IllConditioned : Error {
  using Error::Error;
};

struct NonInvertibleSample : Error {
  using Error::Error;
};

}  // namespace holospec
