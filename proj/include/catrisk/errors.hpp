#pragma once

#include <stdexcept>
#include <string>

namespace catrisk {

// Base class for every recoverable error raised by this library.
// Precondition violations on plain inputs throw std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Root bracketing failed: f has the same sign at both ends.
class NoSignChange : public Error {
 public:
  using Error::Error;
};

// Iterative solver hit its iteration cap before converging.
class MaxIterations : public Error {
 public:
  using Error::Error;
};

// An aggregate that must be non-empty was empty.
class EmptyInput : public Error {
 public:
  using Error::Error;
};

// A function was evaluated outside its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// An inverse was requested at a value outside the function's range.
class RangeError : public Error {
 public:
  using Error::Error;
};

// A solve has no solution in the searched region.
class NoSolution : public Error {
 public:
  using Error::Error;
};

// A limit was requested where none is defined.
class NoLimit : public Error {
 public:
  using Error::Error;
};

// A neighbourhood radius collides with existing structure.
class InvalidEps : public Error {
 public:
  using Error::Error;
};

// A threshold is requested for parameters where none exists.
class InvalidThreshold : public Error {
 public:
  using Error::Error;
};

}  // namespace catrisk
