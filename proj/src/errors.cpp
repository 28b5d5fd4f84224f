#include "warpstab/errors.hpp"

namespace warpstab {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "INVALID_ARGUMENT";
    case Errc::InvalidSpectrum: return "INVALID_SPECTRUM";
    case Errc::NegativeEigenvalue: return "NEGATIVE_EIGENVALUE";
    case Errc::ObataViolation: return "OBATA_VIOLATION";
    case Errc::MuViolation: return "MU_VIOLATION";
    case Errc::Overflow: return "OVERFLOW";
    case Errc::NoConvergence: return "NO_CONVERGENCE";
    case Errc::UnsupportedCase: return "UNSUPPORTED_CASE";
    case Errc::NotFound: return "NOT_FOUND";
    case Errc::BudgetExceeded: return "BUDGET_EXCEEDED";
    case Errc::InvalidState: return "INVALID_STATE";
    case Errc::ResolutionTooCoarse: return "RESOLUTION_TOO_COARSE";
  }
  return "UNKNOWN";
}

} // namespace warpstab
