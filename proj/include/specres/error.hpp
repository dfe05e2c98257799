#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace specres {

// Base class for every failure raised by the library. The CLI maps the
// concrete subclasses onto process exit codes.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Invalid argument or violated precondition.
class ParameterError : public Error {
public:
  using Error::Error;
};

// Evaluation at a point where a transform is undefined (e.g. w = 0).
class DomainError : public Error {
public:
  using Error::Error;
};

// Non-finite activations during the forward pass.
class DivergenceError : public Error {
public:
  DivergenceError(std::size_t layer, const std::string& what)
      : Error("divergence at layer " + std::to_string(layer) + ": " + what), layer_(layer) {}

  std::size_t layer() const noexcept { return layer_; }

private:
  std::size_t layer_;
};

// Eigensolver failure or an out-of-tolerance eigenvalue.
class NumericalError : public Error {
public:
  using Error::Error;
};

// Root selection / continuation failed, or no bracket for a scalar root.
class BranchError : public Error {
public:
  using Error::Error;
};

// A density curve that does not integrate to one.
class IntegrityError : public Error {
public:
  using Error::Error;
};

} // namespace specres
