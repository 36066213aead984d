#pragma once

#include <stdexcept>
#include <string>

namespace triality {

// Thrown when an input fails a domain invariant (bad norm, shape
// mismatch, malformed scenario document, ...).
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when two internal computation routes that must agree to
// rounding level disagree beyond tolerance.  Indicates a logic bug,
// not bad user input.
class consistency_error : public std::runtime_error {
 public:
  explicit consistency_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace triality
