#pragma once

#include <stdexcept>
#include <string>

namespace stw {

/// Malformed arguments: out-of-range vertices, length mismatches, bad levels.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The input is well-formed but violates an algorithmic precondition
/// (most often: the graph is disconnected).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No signal in the requested class can be produced on this graph.
class InfeasibleSignal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Least-squares fit requested on degenerate data.
class FitUndefined : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stw
