#pragma once

#include <stdexcept>
#include <string>

namespace idt {

// Invalid configuration (bad parameter, a < 4A^2, unknown regressor, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or malformed data: missing files, non-numeric CSV fields,
// diverging generators.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A single streaming input rejected before it reaches the model (NaN, wrong
// dimension).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Enumeration oracle refused to run on a tree that is too large.
class EnumerationLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace idt
