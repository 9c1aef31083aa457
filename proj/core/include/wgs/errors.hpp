#pragma once

#include <stdexcept>
#include <string>

namespace wgs {

/// Base class for configuration / input validation problems (CLI exit code 2).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Base class for runtime numerical aborts during an evaluation (CLI exit code 3).
struct NumericalAbort : std::runtime_error {
  explicit NumericalAbort(const std::string& msg) : std::runtime_error(msg) {}
};

/// The Cayley transform's linear solve failed (non-finite generator or
/// breakdown of the factorisation).
struct CayleySingularError : NumericalAbort {
  explicit CayleySingularError(const std::string& msg) : NumericalAbort(msg) {}
};

/// The variational state has (numerically) zero norm: tr rho == 0.
struct DegenerateStateError : NumericalAbort {
  explicit DegenerateStateError(const std::string& msg) : NumericalAbort(msg) {}
};

/// A requested computation exceeds a hard dimension cap (CLI exit code 4).
struct CapExceededError : std::runtime_error {
  explicit CapExceededError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace wgs
