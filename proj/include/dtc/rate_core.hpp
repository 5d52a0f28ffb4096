#pragma once

// Closed-form single-user rate bounds for the Gaussian channel Y = X + S + Z
// with interference S known causally at the transmitter.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dtc/errors.hpp"
#include "dtc/rate.hpp"

namespace dtc {

template <typename Scalar>
struct BasicSingleUserParams {
    Scalar p{};   // transmit power
    Scalar ps{};  // power of the known interference S
    Scalar pz{};  // power of the unknown noise Z
};

using SingleUserParams = BasicSingleUserParams<double>;

namespace detail {

inline void require(bool ok, const char* what)
{
    if (!ok) throw ParameterError(what);
}

template <typename Scalar>
Scalar half_log1p(Scalar x)
{
    using std::log1p;
    return Scalar(0.5) * log1p(x);
}

} // namespace detail

template <typename Scalar>
void validate(const BasicSingleUserParams<Scalar>& prm)
{
    using std::isfinite;
    detail::require(isfinite(prm.p) && isfinite(prm.ps) && isfinite(prm.pz),
                    "single-user parameters must be finite");
    detail::require(prm.p >= 0, "transmit power p must be >= 0");
    detail::require(prm.ps >= 0, "interference power ps must be >= 0");
    detail::require(prm.pz > 0, "noise power pz must be > 0");
}

/// Largest admissible compensation coefficient, sqrt(p/ps); zero when ps == 0.
template <typename Scalar>
Scalar max_compensation(Scalar p, Scalar ps)
{
    using std::sqrt;
    return ps > 0 ? sqrt(p / ps) : Scalar(0);
}

template <typename Scalar>
void validate_beta(const BasicSingleUserParams<Scalar>& prm, Scalar beta)
{
    using std::isfinite;
    if (!isfinite(beta)) throw ParameterError("beta must be finite");
    const Scalar hi = max_compensation(prm.p, prm.ps);
    if (beta < 0 || beta > hi)
        throw ParameterError("beta=" + std::to_string(static_cast<double>(beta)) +
                             " outside [0, sqrt(p/ps)] = [0, " +
                             std::to_string(static_cast<double>(hi)) + "]");
}

/// Rate of the compensation strategy X = U - beta*S with Gaussian U of power
/// p - beta^2 ps, treating the residual (1-beta)S + Z as noise.
template <typename Scalar>
BasicRate<Scalar> c1_inner(const BasicSingleUserParams<Scalar>& prm, Scalar beta)
{
    validate(prm);
    validate_beta(prm, beta);
    const Scalar signal = std::max(Scalar(0), prm.p - beta * beta * prm.ps);
    const Scalar residual = Scalar(1) - beta;
    const Scalar noise = prm.pz + residual * residual * prm.ps;
    return BasicRate<Scalar>::nats(detail::half_log1p(signal / noise));
}

/// Maximizer of c1_inner over the admissible beta interval.
///
/// Smaller root of ps*b^2 - (p+pz+ps)*b + p = 0, evaluated as 2p / (A + sqrt(D))
/// with D = (p-ps)^2 + 2pz(p+ps) + pz^2 so neither step cancels. The product of
/// the roots is p/ps, hence the smaller one never exceeds sqrt(p/ps).
template <typename Scalar>
Scalar beta_star(const BasicSingleUserParams<Scalar>& prm)
{
    using std::sqrt;
    validate(prm);
    if (prm.ps == 0) return Scalar(0);
    const Scalar a = prm.p + prm.pz + prm.ps;
    const Scalar dp = prm.p - prm.ps;
    const Scalar disc = dp * dp + Scalar(2) * prm.pz * (prm.p + prm.ps) + prm.pz * prm.pz;
    const Scalar b = Scalar(2) * prm.p / (a + sqrt(disc));
    return std::clamp(b, Scalar(0), max_compensation(prm.p, prm.ps));
}

template <typename Scalar>
BasicRate<Scalar> c1(const BasicSingleUserParams<Scalar>& prm)
{
    return c1_inner(prm, beta_star(prm));
}

template <typename Scalar>
BasicRate<Scalar> trivial_upper(const BasicSingleUserParams<Scalar>& prm)
{
    validate(prm);
    return BasicRate<Scalar>::nats(detail::half_log1p(prm.p / prm.pz));
}

/// Shaping loss of a cubic lattice, 0.5*ln(2*pi*e/12) nats.
template <typename Scalar>
Scalar lattice_shaping_loss()
{
    using std::log;
    return Scalar(0.5) * log(Scalar(2) * std::numbers::pi_v<Scalar> * std::numbers::e_v<Scalar> / Scalar(12));
}

/// Inflated-lattice lower bound; independent of ps.
template <typename Scalar>
BasicRate<Scalar> c3(const BasicSingleUserParams<Scalar>& prm)
{
    validate(prm);
    const Scalar v = detail::half_log1p(prm.p / prm.pz) - lattice_shaping_loss<Scalar>();
    return BasicRate<Scalar>::nats(std::max(Scalar(0), v));
}

/// Costa's inflation factor p / (p + pz).
template <typename Scalar>
Scalar costa_alpha(const BasicSingleUserParams<Scalar>& prm)
{
    using std::isfinite;
    if (!isfinite(prm.p) || !isfinite(prm.pz) || prm.p < 0 || prm.pz < 0)
        throw ParameterError("costa_alpha needs finite p >= 0 and pz >= 0");
    if (prm.p + prm.pz == 0) throw ParameterError("costa_alpha undefined for p = pz = 0");
    return prm.p / (prm.p + prm.pz);
}

} // namespace dtc
