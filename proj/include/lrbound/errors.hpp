#pragma once

#include <stdexcept>
#include <string>

namespace lrbound {

// Error categories surfaced to callers.  The CLI maps LrError to exit
// code 1 and InternalError (broken invariants inside this library) to 2.
enum class Errc {
  empty_model,
  disconnected,
  missing_k,
  negative_value,
  invalid_field,
  invalid_lambda,
  no_cycles,
  zero_xi,
  zero_k,
  form_mismatch,
  too_small,
  too_large,
  dimension_mismatch,
  non_hermitian,
  bound_violated,
  no_chains,
  io_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::empty_model: return "EmptyModel";
    case Errc::disconnected: return "Disconnected";
    case Errc::missing_k: return "MissingK";
    case Errc::negative_value: return "NegativeValue";
    case Errc::invalid_field: return "InvalidField";
    case Errc::invalid_lambda: return "InvalidLambda";
    case Errc::no_cycles: return "NoCycles";
    case Errc::zero_xi: return "ZeroXi";
    case Errc::zero_k: return "ZeroK";
    case Errc::form_mismatch: return "FormMismatch";
    case Errc::too_small: return "TooSmall";
    case Errc::too_large: return "TooLarge";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::non_hermitian: return "NonHermitian";
    case Errc::bound_violated: return "BoundViolated";
    case Errc::no_chains: return "NoChains";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

class LrError : public std::runtime_error {
 public:
  LrError(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

// Consistency failures that indicate a bug in this library, not bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw LrError(code, message);
}

}  // namespace lrbound
