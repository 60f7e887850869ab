#pragma once

#include <stdexcept>
#include <string>

namespace frida {

// Two arithmetic partners (or a batch and a layer) disagree on dimensions.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a canary round window runs past the end of the server pool.
class PoolExhausted : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Raised by configuration loading/validation. The message names the key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace frida
