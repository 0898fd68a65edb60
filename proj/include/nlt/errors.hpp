#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nlt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or precondition violation at an API boundary.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Raised before a step whose time step violates the CFL restriction.
class CflViolation : public Error {
 public:
  CflViolation(double cfl_number, double limit)
      : Error("CFL violation: lambda*sup W' = " + std::to_string(cfl_number) +
              " exceeds " + std::to_string(limit)),
        cfl_number_(cfl_number) {}

  double cfl_number() const noexcept { return cfl_number_; }

 private:
  double cfl_number_;
};

/// A weight row could not reach the requested tail tolerance within its cap.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Two vehicles came closer than one vehicle length.
class OrderingViolation : public Error {
 public:
  OrderingViolation(std::size_t index, double gap, double ell)
      : Error("ordering violation at vehicle " + std::to_string(index) +
              ": gap " + std::to_string(gap) + " < vehicle length " +
              std::to_string(ell)),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace nlt
