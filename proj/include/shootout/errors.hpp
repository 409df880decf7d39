#pragma once

#include <stdexcept>
#include <string>

namespace shootout {

// Raised for parameters or states outside an operation's domain.
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when a numerical procedure cannot meet its contract
// (bracket failure, iteration cap, unreachable tolerance).
class SolverFailure : public std::runtime_error {
 public:
  explicit SolverFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace shootout
