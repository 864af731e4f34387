#include "kdvb/error.hpp"

namespace kdvb {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Domain: return "E_DOMAIN";
    case ErrorCode::Index: return "E_INDEX";
    case ErrorCode::Convergence: return "E_CONVERGENCE";
    case ErrorCode::Singular: return "E_SINGULAR";
    case ErrorCode::NonFinite: return "E_NONFINITE";
    case ErrorCode::Hypothesis: return "E_HYPOTHESIS";
    case ErrorCode::Config: return "E_CONFIG";
    case ErrorCode::Io: return "E_IO";
    case ErrorCode::Usage: return "E_USAGE";
    case ErrorCode::Containment: return "E_CONTAINMENT";
    case ErrorCode::Verification: return "E_VERIFY";
  }
  return "E_UNKNOWN";
}

}  // namespace kdvb
