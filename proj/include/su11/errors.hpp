#pragma once

#include <stdexcept>
#include <string>

namespace su11 {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter is outside its physical domain. Carries the offending key and
/// the accepted range so front ends can report both.
class DomainError : public Error {
 public:
  DomainError(std::string key, std::string accepted, double value);

  const std::string& key() const noexcept { return key_; }
  const std::string& accepted() const noexcept { return accepted_; }
  double value() const noexcept { return value_; }

 private:
  std::string key_;
  std::string accepted_;
  double value_;
};

class DegenerateMoments : public Error {
 public:
  using Error::Error;
};

class ZeroInformation : public Error {
 public:
  using Error::Error;
};

class NonPositivePhotonNumber : public Error {
 public:
  using Error::Error;
};

// Signals a non-monotone objective inside a threshold solve, i.e. a formula bug.
class BracketFailure : public Error {
 public:
  using Error::Error;
};

class TruncationOverflow : public Error {
 public:
  TruncationOverflow(double leakage, int n_max);
  double leakage() const noexcept { return leakage_; }

 private:
  double leakage_;
};

class IllConditioned : public Error {
 public:
  using Error::Error;
};

}  // namespace su11
