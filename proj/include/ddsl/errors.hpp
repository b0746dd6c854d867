#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ddsl {

// Invalid or incomplete configuration. The CLI maps this to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A run produced a non-finite nodal value or diagnostic. The CLI maps this to exit status 3.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::size_t step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

}  // namespace ddsl
