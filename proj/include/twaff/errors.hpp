#pragma once

#include <stdexcept>
#include <string>

namespace twaff {

/// A computation would exceed a configured budget (enumeration cap, step cap, ...).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical consistency check inside an algorithm failed.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace twaff
