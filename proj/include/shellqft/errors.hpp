#pragma once

#include <stdexcept>
#include <string>

namespace shellqft {

//! Invalid input to a numerical routine (bad radius, R <= 2M, ...).
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

//! A solver or quadrature could not reach its target. The message carries
//! the achieved values so the caller can report them.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

//! Rejected run configuration. `key()` is the dotted key path at fault.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string key, const std::string &what)
      : std::runtime_error(key.empty() ? what : key + ": " + what),
        m_key(std::move(key)) {}
  const std::string &key() const { return m_key; }

private:
  std::string m_key;
};

} // namespace shellqft
