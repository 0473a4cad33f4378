#pragma once

#include <stdexcept>
#include <string>

namespace linform {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A VarRef or ParamRef without a matching binding.
struct UnboundSymbol : Error {
  explicit UnboundSymbol(const std::string& symbol)
      : Error("unbound symbol: " + symbol), symbol(symbol) {}
  std::string symbol;
};

/// log of a non-positive value, sqrt of a negative value, division by zero.
struct DomainError : Error {
  using Error::Error;
};

/// A finite interval was required but a variable bound is infinite.
struct UnboundedInterval : Error {
  using Error::Error;
};

/// emit_lp was handed a model with a nonlinear subexpression.
struct NotLinear : Error {
  NotLinear(const std::string& path, const std::string& what)
      : Error("not linear at " + path + ": " + what), path(path) {}
  std::string path;
};

/// Nonlinearity outside the six supported patterns (continuous products,
/// nested patterns, unprovable denominator positivity, ...).
struct UnsupportedNonlinearity : Error {
  using Error::Error;
};

struct FractionalNotIsolated : Error {
  using Error::Error;
};

struct DenominatorNotPositive : Error {
  using Error::Error;
};

struct FractionalWithIntegers : Error {
  using Error::Error;
};

struct NonAffineArg : Error {
  using Error::Error;
};

struct NonInvertibleOnRange : Error {
  using Error::Error;
};

struct OracleScaleExceeded : Error {
  using Error::Error;
};

struct NoConvergence : Error {
  using Error::Error;
};

struct ProjectionFailure : Error {
  using Error::Error;
};

/// Fixpoint driver exceeded its defensive iteration cap; indicates a bug.
struct NonTermination : Error {
  using Error::Error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

}  // namespace linform
