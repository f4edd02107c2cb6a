#pragma once

#include <stdexcept>
#include <string>

namespace purity {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside its documented domain (range, degree, dimension).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A unitary-group dimension vanishes where a formula divides by it.
class DegenerateDimensionError : public Error {
 public:
  using Error::Error;
};

/// A Markov chain failed its acceptance or effective-sample-size thresholds.
class SamplerDiagnostic : public Error {
 public:
  using Error::Error;
};

}  // namespace purity
