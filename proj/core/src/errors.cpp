#include "bolza/errors.hpp"

#include <ostream>

#include "bolza/ext_real.hpp"

namespace bolza {

std::string_view toString(ErrorCode code) {
    switch (code) {
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::ProperNessViolation: return "ProperNessViolation";
        case ErrorCode::InfeasiblePoint: return "InfeasiblePoint";
        case ErrorCode::DegenerateInput: return "DegenerateInput";
        case ErrorCode::UnsupportedClass: return "UnsupportedClass";
        case ErrorCode::SingularInnerMatrix: return "SingularInnerMatrix";
        case ErrorCode::BoundaryNode: return "BoundaryNode";
        case ErrorCode::EmptySet: return "EmptySet";
        case ErrorCode::NotPsd: return "NotPsd";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

std::ostream& operator<<(std::ostream& os, ExtReal v) {
    if (v.isInfinite()) return os << "+inf";
    return os << v.raw();
}

}  // namespace bolza
