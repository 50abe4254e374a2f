#pragma once

#include <stdexcept>
#include <string>

namespace entroscope {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad spec, bad config, precondition violation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A rational Sturmian approximant was asked for words longer than it is valid for.
class HorizonError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A symbolic point was evaluated outside its representable window.
class WindowError : public Error {
 public:
  using Error::Error;
};

/// An enumeration or brute-force budget was exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Two routes that must agree (fast path and oracle) disagreed.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace entroscope
