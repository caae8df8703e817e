#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace carnot {

enum class ErrorCode {
  invalid_argument,
  invalid_group,
  parse_error,
  unsupported_step,
  invalid_scale,
  degenerate_sampler,
  non_finite_sample,
  non_integrable_weight,
  domain_error,
  singular_evaluation_point,
  zero_norm,
  bad_epsilon,
  bad_tau,
  inadmissible_params,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace carnot
