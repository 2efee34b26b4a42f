#pragma once

#include <stdexcept>
#include <string>

namespace willmore {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed mesh, unsupported topology, out-of-range parameters.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A numerical routine did not reach its tolerance.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace willmore
