#ifndef WARPSTAB_ERRORS_HPP
#define WARPSTAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace warpstab {

enum class Errc {
  InvalidArgument,
  InvalidSpectrum,
  NegativeEigenvalue,
  ObataViolation,
  MuViolation,
  Overflow,
  NoConvergence,
  UnsupportedCase,
  NotFound,
  BudgetExceeded,
  InvalidState,
  ResolutionTooCoarse,
};

const char* errc_name(Errc code);

/** Exception carrying a machine-readable error code plus a human message. */
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

  /// True for input/validation problems (CLI exit 1); false for numerical failures (exit 2).
  bool is_validation() const {
    switch (code_) {
      case Errc::InvalidArgument:
      case Errc::InvalidSpectrum:
      case Errc::NegativeEigenvalue:
      case Errc::ObataViolation:
      case Errc::MuViolation:
      case Errc::UnsupportedCase:
      case Errc::NotFound:
      case Errc::InvalidState:
        return true;
      default:
        return false;
    }
  }

private:
  Errc code_;
};

} // namespace warpstab

#endif
