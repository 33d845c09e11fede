#pragma once

#include <stdexcept>
#include <string>

namespace npsvor {

// Exception categories map one-to-one onto CLI exit codes.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace npsvor
