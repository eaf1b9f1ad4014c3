#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rglab {

enum class ErrorCode {
  invalid_argument,
  index_out_of_range,
  overflow,
  not_normalizable,
  undetermined,
  repeated_lambda,
  degenerate,
  step_underflow,
  verification_failure,
  config,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the integrator when the step size collapses.
class StepUnderflow : public Error {
 public:
  StepUnderflow(double t, const std::string& what)
      : Error(ErrorCode::step_underflow, what), t_(t) {}

  double time() const noexcept { return t_; }

 private:
  double t_;
};

/// Non-fatal numerical warnings (ill-conditioning and the like). The default
/// handler prints to stderr.
using WarningHandler = std::function<void(std::string_view)>;
void set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

}  // namespace rglab
