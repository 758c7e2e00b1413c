#pragma once

#include <stdexcept>

namespace handover {

// Failure taxonomy shared by the library and the CLI exit codes:
// io=1, schema=2, config=3, numeric=4.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace handover
