#pragma once

#include <stdexcept>
#include <string>

namespace stefan {

// Malformed expression source; offset is the byte position in the input.
struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(const std::string& msg, std::size_t off)
      : std::runtime_error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

// Evaluation left the expression's domain (1/0, sqrt of a negative, ...).
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad problem definition, config file, or CLI input.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A time-step solve failed; carries the step index.
struct SolveError : std::runtime_error {
  int step;
  SolveError(const std::string& msg, int k)
      : std::runtime_error(msg + " (time step " + std::to_string(k) + ")"), step(k) {}
};

}  // namespace stefan
