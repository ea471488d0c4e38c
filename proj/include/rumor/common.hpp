#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rumor {

using TokenId = std::uint32_t;
using DocIndex = std::uint32_t;
using Label = std::int64_t;

/// Label reserved for one-member classes before label propagation.
inline constexpr Label kSingletonLabel = -1;

/// Base error for all library failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for invalid arguments or configuration values.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace rumor
