#pragma once

#include <stdexcept>
#include <string>

namespace hut {

/// Invalid parameter combination (bad epsilon, k larger than the small batch, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent data (unreadable CSV, duplicate ids, negative values).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// API misuse: a caller broke a documented precondition.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hut
