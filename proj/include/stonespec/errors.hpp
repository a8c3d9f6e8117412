#pragma once

#include <stdexcept>
#include <string>

namespace stonespec {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};
struct ShapeMismatch : Error {
  using Error::Error;
};
struct NonHermitian : Error {
  using Error::Error;
};
struct NotAProjection : Error {
  using Error::Error;
};
struct NotAPartialIsometry : Error {
  using Error::Error;
};
struct NotUnitary : Error {
  using Error::Error;
};
struct BadRank : Error {
  using Error::Error;
};
struct NotCentral : Error {
  using Error::Error;
};
struct NotAbelian : Error {
  using Error::Error;
};
struct NotOverBeta : Error {
  using Error::Error;
};
struct NotSubnormalized : Error {
  using Error::Error;
};
struct ZeroProjection : Error {
  using Error::Error;
};
struct NotInDomain : Error {
  using Error::Error;
};
struct DifferentFibre : Error {
  using Error::Error;
};
struct NotAFilterBase : Error {
  using Error::Error;
};
struct AtomNotAdmissible : Error {
  using Error::Error;
};
struct NotCommuting : Error {
  using Error::Error;
};
struct ClosureCapExceeded : Error {
  using Error::Error;
};
struct TooLarge : Error {
  using Error::Error;
};
struct RequiresNGe2 : Error {
  using Error::Error;
};
struct BadInput : Error {
  using Error::Error;
};

}  // namespace stonespec
