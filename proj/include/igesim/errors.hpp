#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace igesim {

// Base for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid or inconsistent configuration (scenario files, schedule requests).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Schedule row not present in a registry, or a plan index out of range.
class EncodingError : public Error {
 public:
  using Error::Error;
};

// Linear system cannot be solved (rank-deficient transmit-power matrix).
class UnsolvableError : public Error {
 public:
  using Error::Error;
};

// Measurement data does not cover every schedule row.
class IncompleteDataError : public Error {
 public:
  IncompleteDataError(const std::string& what, std::vector<int> missing)
      : Error(what), missing_rows(std::move(missing)) {}
  std::vector<int> missing_rows;
};

// Topology fails a structural requirement (e.g. unreachable node).
class TopologyError : public Error {
 public:
  using Error::Error;
};

}  // namespace igesim
