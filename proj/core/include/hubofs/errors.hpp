#pragma once

#include <stdexcept>
#include <string>

namespace hubofs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller passed a parameter outside its documented range.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Input data (CSV rows, artifact files) is malformed or inconsistent.
class DataError : public Error {
 public:
  using Error::Error;
};

/// The requested operation exceeds a size bound (e.g. 2^n enumeration).
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace hubofs
