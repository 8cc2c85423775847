#pragma once

#include <stdexcept>
#include <string>

namespace gzsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Uniform clustering could not place a mobile within the redraw cap.
class PlacementInfeasible : public Error {
 public:
  PlacementInfeasible(std::size_t mobile, std::size_t attempts)
      : Error("placement infeasible: mobile " + std::to_string(mobile) +
              " still inside an exclusion zone after " +
              std::to_string(attempts) + " redraws"),
        mobile_(mobile) {}

  std::size_t mobile() const noexcept { return mobile_; }

 private:
  std::size_t mobile_;
};

/// The closed form produced a value outside [0, 1] beyond rounding slack.
/// This indicates a bug, never bad user input.
class NumericalInconsistency : public Error {
 public:
  using Error::Error;
};

/// A constraint search could not meet its target anywhere in range.
class TargetUnachievable : public Error {
 public:
  using Error::Error;
};

/// Bad experiment configuration. `key()` names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace gzsim
