#pragma once

#include <cmath>
#include <iosfwd>
#include <limits>

#include "bolza/errors.hpp"

namespace bolza {

/// Real number or +infinity. -infinity is not representable: producing it
/// means some function in play is improper, which is reported as an error.
class ExtReal {
public:
    constexpr ExtReal() = default;

    /// Accepts +inf; rejects NaN and -inf.
    ExtReal(double v) : value_(v) {  // NOLINT(google-explicit-constructor)
        if (std::isnan(v)) fail(ErrorCode::ProperNessViolation, "NaN is not an extended real");
        if (v == -std::numeric_limits<double>::infinity())
            fail(ErrorCode::ProperNessViolation, "-infinity produced");
    }

    static ExtReal infinity() { return ExtReal(std::numeric_limits<double>::infinity()); }

    [[nodiscard]] bool isFinite() const { return value_ != std::numeric_limits<double>::infinity(); }
    [[nodiscard]] bool isInfinite() const { return !isFinite(); }

    /// Underlying double (+inf when infinite).
    [[nodiscard]] double raw() const { return value_; }

    /// Finite value; throws InfeasiblePoint when +inf.
    [[nodiscard]] double value() const {
        if (!isFinite()) fail(ErrorCode::InfeasiblePoint, "value is +infinity");
        return value_;
    }

    // +inf absorbs everything, including "+inf - inf".
    friend ExtReal operator+(ExtReal a, ExtReal b) {
        if (a.isInfinite() || b.isInfinite()) return infinity();
        return ExtReal(a.value_ + b.value_);
    }
    friend ExtReal operator-(ExtReal a, ExtReal b) {
        if (a.isInfinite() || b.isInfinite()) return infinity();
        return ExtReal(a.value_ - b.value_);
    }
    ExtReal& operator+=(ExtReal other) { return *this = *this + other; }

    friend bool operator==(ExtReal a, ExtReal b) { return a.value_ == b.value_; }
    friend bool operator<(ExtReal a, ExtReal b) { return a.value_ < b.value_; }
    friend bool operator<=(ExtReal a, ExtReal b) { return a.value_ <= b.value_; }

private:
    double value_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, ExtReal v);

}  // namespace bolza
