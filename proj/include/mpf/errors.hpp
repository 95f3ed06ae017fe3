#pragma once

#include <stdexcept>
#include <string>

namespace mpf {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class DuplicateExponent : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class InvalidFormula : public Error {
 public:
  using Error::Error;
};

class RoundingCollision : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

class DimensionCap : public Error {
 public:
  using Error::Error;
};

class Unreachable : public Error {
 public:
  using Error::Error;
};

}  // namespace mpf
