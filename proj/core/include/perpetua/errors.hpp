#pragma once

#include <stdexcept>
#include <string>

namespace perpetua {

// Base class for all library errors so callers can catch perpetua::Error.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad argument values: non-finite entries, negative counts, malformed grids.
struct InvalidInput : Error {
  using Error::Error;
};

// Operands whose dimensions do not agree.
struct DimensionError : Error {
  using Error::Error;
};

// A frame (set of direction vectors) that is not orthonormal.
struct FrameError : Error {
  using Error::Error;
};

// Malformed run/CLI/JSON configuration.
struct ConfigError : Error {
  using Error::Error;
};

// Numerically ambiguous structure (e.g. two candidate polynomial degrees or
// eigenvalue clusterings that the tolerances cannot separate).
struct DegeneracyError : Error {
  using Error::Error;
};

// A linear system too ill-conditioned to trust.
struct ConditioningError : Error {
  using Error::Error;
};

}  // namespace perpetua
