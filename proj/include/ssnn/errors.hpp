#pragma once

#include <stdexcept>
#include <string>

namespace ssnn {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A parameter block or config file violates a documented invariant.
/// The message names the offending field.
class ConfigError : public Error {
  public:
    ConfigError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

  private:
    std::string field_;
};

/// Caller-supplied data is out of domain (empty image, bad neuron id, ...).
class InputError : public Error {
  public:
    using Error::Error;
};

/// An internal invariant broke; indicates a bug in the caller or library.
class InvariantError : public Error {
  public:
    using Error::Error;
};

}  // namespace ssnn
