#pragma once

#include <stdexcept>
#include <string>

namespace spectradiag {

// Machine-checkable failure codes. Every throwing operation documents which
// codes it can raise; tests assert on the code, not the message text.
enum class errc {
  length_mismatch,
  hypothesis_violated,
  out_of_range,
  not_in_class_f,
  not_summable,
  interior_infinite,
  not_nondecreasing,
  not_enough_infinite,
  bounds_violated,
  budget_exceeded,
  order_violated,
  no_receiver,
  precondition_violated,
  infeasible_input,
  parse_error,
};

const char* errc_name(errc code) noexcept;

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what_arg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what_arg), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what_arg) {
  throw error(code, what_arg);
}

}  // namespace spectradiag
