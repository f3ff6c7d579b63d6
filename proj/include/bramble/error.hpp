#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bramble {

enum class Errc {
  invalid_argument,
  invalid_dimension,
  dimension_mismatch,
  ill_conditioned_basis,
  degenerate_domain,
  not_star_shaped,
  insufficient_smoothness,
  out_of_domain,
  hypothesis_violated,
  invalid_scale,
  empty_quadrature,
};

std::string_view to_string(Errc code);

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace bramble
