#pragma once

#include <stdexcept>
#include <string>

namespace angsync {

/// Precondition or shape violation in a library call.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An iterative method ran out of budget before meeting its accuracy target.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input (matrix files, bundles, configs).
class FormatError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(what);
}

inline void require_dims(bool cond, const std::string& what) {
  if (!cond) throw DimensionError(what);
}

}  // namespace detail
}  // namespace angsync
