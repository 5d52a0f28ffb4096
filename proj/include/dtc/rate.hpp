#pragma once

#include <cmath>
#include <compare>
#include <numbers>
#include <string>
#include <string_view>

#include "dtc/errors.hpp"

namespace dtc {

enum class Unit { Bits, Nats };

inline Unit parse_unit(std::string_view s)
{
    if (s == "bits") return Unit::Bits;
    if (s == "nats") return Unit::Nats;
    throw ParameterError("unknown unit '" + std::string(s) + "' (expected bits|nats)");
}

inline const char* to_string(Unit u) { return u == Unit::Bits ? "bits" : "nats"; }

/// Information rate, stored in nats.
///
/// Construction clamps round-off negatives (|v| < 1e-14) to zero; anything more
/// negative, or non-finite, is rejected.
template <typename Scalar>
class BasicRate {
public:
    static constexpr Scalar kClampTolerance = Scalar(1e-14);

    constexpr BasicRate() = default;

    static BasicRate nats(Scalar v) { return BasicRate(v); }
    static BasicRate bits(Scalar v) { return BasicRate(v * std::numbers::ln2_v<Scalar>); }

    Scalar nats() const { return value_; }
    Scalar bits() const { return value_ / std::numbers::ln2_v<Scalar>; }
    Scalar in(Unit u) const { return u == Unit::Bits ? bits() : nats(); }

    friend auto operator<=>(const BasicRate&, const BasicRate&) = default;

    friend BasicRate operator+(BasicRate a, BasicRate b) { return BasicRate(a.value_ + b.value_); }
    friend BasicRate operator*(Scalar w, BasicRate r) { return BasicRate(w * r.value_); }

private:
    explicit BasicRate(Scalar v) : value_(v)
    {
        using std::isfinite;
        if (!isfinite(value_)) throw NumericalError("non-finite rate");
        if (value_ < Scalar(0)) {
            if (value_ > -kClampTolerance)
                value_ = Scalar(0);
            else
                throw NumericalError("negative rate " + std::to_string(static_cast<double>(value_)));
        }
    }

    Scalar value_ = Scalar(0);
};

using Rate = BasicRate<double>;

} // namespace dtc
