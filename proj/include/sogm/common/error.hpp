#pragma once

#include <stdexcept>
#include <string>

namespace sogm {

// Error taxonomy shared across the library. The CLI maps these to process
// exit codes: invalid input 2, missing artifact 3, numerical failure 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class IndexOutOfBounds : public Error {
 public:
  using Error::Error;
};

class UnknownLayer : public Error {
 public:
  using Error::Error;
};

class UnknownClass : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class EmptySequence : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace sogm
