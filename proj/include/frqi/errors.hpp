#pragma once

#include <stdexcept>
#include <string>

namespace frqi {

enum class errc {
  not_pgm,
  non_square,
  side_not_power_of_two,
  maxval_not_255,
  truncated,
  non_encodable,
  incompatible_sides,
  side_mismatch,
  io_error,
  too_large,
  unsupported_arity,
  unknown_gate_kind,
  map_too_small,
  disconnected_map,
  too_many_qubits,
  zero_shots,
  dim_mismatch,
  gate_budget_exceeded,
  bad_argument,
};

const char* to_string(errc code);

class FrqiError : public std::runtime_error {
 public:
  FrqiError(errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace frqi
