#pragma once

#include <stdexcept>

namespace svmcompare {

// Raised for invalid inputs, malformed files, and solver failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace svmcompare
