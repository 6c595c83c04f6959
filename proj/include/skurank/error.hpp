#pragma once

#include <stdexcept>
#include <string>

namespace skurank {

/// Raised on malformed inputs, violated preconditions, and numeric failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace skurank
