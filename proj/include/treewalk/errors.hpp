#pragma once

#include <stdexcept>
#include <string>

namespace treewalk {

// Bad numeric parameter or shape. CLI exit code 3.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or out-of-range walk/config input. CLI exit code 3.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoParentError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class InvalidPartition : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class AmbiguousCylinder : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// |a| reached 1 somewhere, so the diagonalizing unitary is undefined.
class SingularCoinError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// The secondary symbol vanishes somewhere on the circle (|a| == |p|).
// CLI exit code 2. `cell` names the offending cylinder when known.
class SymbolSingular : public std::runtime_error {
 public:
  explicit SymbolSingular(const std::string& what, std::string cell = {})
      : std::runtime_error(what), cell_(std::move(cell)) {}
  const std::string& cell() const noexcept { return cell_; }

 private:
  std::string cell_;
};

class NoUniqueSolution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Singular values sit too close to the rank threshold to decide a kernel.
class InconclusiveTruncation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace treewalk
