#pragma once

#include <stdexcept>
#include <string>

namespace sglab {

enum class Errc {
  invalid_radius,
  unknown_generator,
  singular_derivative,
  no_finite_fix,
  unsupported_generator,
  estimate_undefined,
  search_budget,
  config_error,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace sglab
