#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bolza {

enum class ErrorCode {
    DimensionMismatch,
    ProperNessViolation,
    InfeasiblePoint,
    DegenerateInput,
    UnsupportedClass,
    SingularInnerMatrix,
    BoundaryNode,
    EmptySet,
    NotPsd,
    InvalidArgument,
    ParseError,
};

std::string_view toString(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(toString(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const std::string& what) {
    if (!condition) fail(code, what);
}

}  // namespace bolza
