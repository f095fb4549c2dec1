#pragma once

#include <stdexcept>
#include <string>

namespace taskgraph {

// Malformed input: bad files, out-of-range indices, violated preconditions.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The numbers went bad: zero denominators, non-finite losses.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace taskgraph
