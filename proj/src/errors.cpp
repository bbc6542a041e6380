#include "jpi/errors.hpp"

#include <cmath>

namespace jpi {

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidParameter: return "invalid_parameter";
        case ErrorCode::DivergentInductance: return "divergent_inductance";
        case ErrorCode::SingularNetwork: return "singular_network";
        case ErrorCode::Infeasible: return "infeasible";
        case ErrorCode::Config: return "config";
        case ErrorCode::Io: return "io";
        case ErrorCode::Numerical: return "numerical";
        case ErrorCode::DimensionMismatch: return "dimension_mismatch";
        case ErrorCode::Internal: return "internal";
    }
    return "unknown";
}

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) throw InvalidParameter(std::string(name) + " must be finite");
}

}  // namespace jpi
