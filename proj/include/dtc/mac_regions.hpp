#pragma once

// Two-user rate regions for Y = X1 + X2 + S + Z: pentagons for the causal
// (dirty tape) MAC, the mixed noncausal/causal MAC, the state-free outer
// bound, and the upper frontier of a union of pentagons.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dtc/errors.hpp"
#include "dtc/rate.hpp"
#include "dtc/rate_core.hpp"

namespace dtc {

template <typename Scalar>
struct BasicMacParams {
    Scalar p1{};
    Scalar p2{};
    Scalar ps{};
    Scalar pz{};
};
using MacParams = BasicMacParams<double>;

/// Compensation coefficients when both transmitters see S causally.
template <typename Scalar>
struct BasicMacDtcCoefficients {
    Scalar beta1{};
    Scalar beta2{};
};
using MacDtcCoefficients = BasicMacDtcCoefficients<double>;

/// Transmitter 1 knows S noncausally (Costa-style alpha), transmitter 2
/// causally (compensation beta, either sign).
template <typename Scalar>
struct BasicJdptCoefficients {
    Scalar alpha{};
    Scalar beta{};
};
using JdptCoefficients = BasicJdptCoefficients<double>;

/// Signed log-ratio bounds (nats) before clamping at zero.
template <typename Scalar>
struct RawBounds {
    Scalar r1{};
    Scalar r2{};
    Scalar sum{};

    bool any_negative() const { return r1 < 0 || r2 < 0 || sum < 0; }
};

/// {0 <= R1 <= r1_max, 0 <= R2 <= r2_max, R1 + R2 <= r_sum}.
template <typename Scalar>
struct BasicPentagon {
    BasicRate<Scalar> r1_max;
    BasicRate<Scalar> r2_max;
    BasicRate<Scalar> r_sum;

    static BasicPentagon clamped(const RawBounds<Scalar>& raw)
    {
        return {BasicRate<Scalar>::nats(std::max(Scalar(0), raw.r1)),
                BasicRate<Scalar>::nats(std::max(Scalar(0), raw.r2)),
                BasicRate<Scalar>::nats(std::max(Scalar(0), raw.sum))};
    }

    /// Membership with slack `tol` (nats) on every inequality.
    bool contains(Scalar r1, Scalar r2, Scalar tol = Scalar(0)) const
    {
        return r1 >= -tol && r2 >= -tol && r1 <= r1_max.nats() + tol && r2 <= r2_max.nats() + tol &&
               r1 + r2 <= r_sum.nats() + tol;
    }
};
using Pentagon = BasicPentagon<double>;

template <typename Scalar>
void validate(const BasicMacParams<Scalar>& prm)
{
    using std::isfinite;
    detail::require(isfinite(prm.p1) && isfinite(prm.p2) && isfinite(prm.ps) && isfinite(prm.pz),
                    "MAC parameters must be finite");
    detail::require(prm.p1 >= 0 && prm.p2 >= 0, "transmit powers p1, p2 must be >= 0");
    detail::require(prm.ps >= 0, "interference power ps must be >= 0");
    detail::require(prm.pz > 0, "noise power pz must be > 0");
}

template <typename Scalar>
void validate(const BasicMacParams<Scalar>& prm, const BasicMacDtcCoefficients<Scalar>& c)
{
    using std::isfinite;
    validate(prm);
    detail::require(isfinite(c.beta1) && isfinite(c.beta2), "beta1, beta2 must be finite");
    const Scalar hi1 = max_compensation(prm.p1, prm.ps);
    const Scalar hi2 = max_compensation(prm.p2, prm.ps);
    if (c.beta1 < 0 || c.beta1 > hi1 || c.beta2 < 0 || c.beta2 > hi2)
        throw ParameterError("beta_i must lie in [0, sqrt(p_i/ps)]; got beta1=" +
                             std::to_string(static_cast<double>(c.beta1)) +
                             " beta2=" + std::to_string(static_cast<double>(c.beta2)));
}

template <typename Scalar>
void validate(const BasicMacParams<Scalar>& prm, const BasicJdptCoefficients<Scalar>& c)
{
    using std::abs;
    using std::isfinite;
    validate(prm);
    detail::require(isfinite(c.alpha) && isfinite(c.beta), "alpha, beta must be finite");
    if (prm.p1 == 0 && c.alpha != 0) throw ParameterError("alpha must be 0 when p1 = 0");
    if (abs(c.beta) > max_compensation(prm.p2, prm.ps))
        throw ParameterError("beta must lie in [-sqrt(p2/ps), sqrt(p2/ps)]; got " +
                             std::to_string(static_cast<double>(c.beta)));
}

template <typename Scalar>
RawBounds<Scalar> mac_dtc_bounds(const BasicMacParams<Scalar>& prm, const BasicMacDtcCoefficients<Scalar>& c)
{
    using std::log1p;
    validate(prm, c);
    const Scalar res = Scalar(1) - c.beta1 - c.beta2;
    const Scalar noise = res * res * prm.ps + prm.pz;
    const Scalar s1 = std::max(Scalar(0), prm.p1 - c.beta1 * c.beta1 * prm.ps);
    const Scalar s2 = std::max(Scalar(0), prm.p2 - c.beta2 * c.beta2 * prm.ps);
    return {Scalar(0.5) * log1p(s1 / noise), Scalar(0.5) * log1p(s2 / noise),
            Scalar(0.5) * log1p((s1 + s2) / noise)};
}

template <typename Scalar>
BasicPentagon<Scalar> mac_dtc_pentagon(const BasicMacParams<Scalar>& prm, const BasicMacDtcCoefficients<Scalar>& c)
{
    return BasicPentagon<Scalar>::clamped(mac_dtc_bounds(prm, c));
}

template <typename Scalar>
RawBounds<Scalar> jdpt_bounds(const BasicMacParams<Scalar>& prm, const BasicJdptCoefficients<Scalar>& c)
{
    using std::log;
    using std::log1p;
    validate(prm, c);
    // alpha^2 ps / p1, zero when alpha == 0 (including p1 == 0).
    const Scalar gain = c.alpha == 0 ? Scalar(0) : c.alpha * c.alpha * prm.ps / prm.p1;
    const Scalar res = Scalar(1) - c.alpha - c.beta;
    const Scalar denom = res * res * prm.ps + gain * prm.pz + prm.pz;
    const Scalar res2 = Scalar(1) - c.beta;
    const Scalar s2 = std::max(Scalar(0), prm.p2 - c.beta * c.beta * prm.ps);
    return {Scalar(0.5) * log((prm.p1 + res2 * res2 * prm.ps + prm.pz) / denom),
            Scalar(0.5) * log1p(s2 * (Scalar(1) + gain) / denom),
            Scalar(0.5) * log((prm.p1 + prm.p2 + (Scalar(1) - Scalar(2) * c.beta) * prm.ps + prm.pz) / denom)};
}

template <typename Scalar>
BasicPentagon<Scalar> jdpt_pentagon(const BasicMacParams<Scalar>& prm, const BasicJdptCoefficients<Scalar>& c)
{
    return BasicPentagon<Scalar>::clamped(jdpt_bounds(prm, c));
}

/// Capacity region of the Gaussian MAC without interference.
template <typename Scalar>
BasicPentagon<Scalar> gaussian_mac_capacity_pentagon(const BasicMacParams<Scalar>& prm)
{
    using std::log1p;
    validate(prm);
    return {BasicRate<Scalar>::nats(Scalar(0.5) * log1p(prm.p1 / prm.pz)),
            BasicRate<Scalar>::nats(Scalar(0.5) * log1p(prm.p2 / prm.pz)),
            BasicRate<Scalar>::nats(Scalar(0.5) * log1p((prm.p1 + prm.p2) / prm.pz))};
}

// ---------------------------------------------------------------------------
// Frontier of a union of pentagons

struct RatePoint {
    double r1 = 0.0;  // nats
    double r2 = 0.0;  // nats
};

/// Upper boundary of a union of pentagons: r1 strictly increasing, r2
/// nonincreasing.
struct Frontier {
    std::vector<RatePoint> points;

    /// r2 at exactly this r1, if the frontier has such a point.
    std::optional<double> r2_at(double r1) const;
};

/// n uniform points on [0, hi].
std::vector<double> uniform_grid(double hi, int n);

/// For each r1 in the grid (kept while some pentagon reaches it):
///   r2(r1) = max over pentagons with r1_max >= r1 of max(0, min(r2_max, r_sum - r1)).
/// The largest r1_max of the set is appended as a final point when it is not
/// already on the grid. `best_index`, when given, receives the maximizing
/// pentagon per frontier point (first in sequence order among equals).
Frontier frontier_union(std::span<const Pentagon> pentagons, std::span<const double> r1_grid,
                        std::vector<std::size_t>* best_index = nullptr);

/// Grid on [0, max r1_max] with 1001 points.
Frontier frontier_union(std::span<const Pentagon> pentagons);

struct MacDtcGrid {
    int beta_points = 201;   // per transmitter
    int r1_points = 1001;    // on [0, outer r1_max]
};

struct JdptGrid {
    double alpha_lo = -1.0;
    double alpha_hi = 2.0;
    int alpha_points = 301;
    int beta_points = 201;
    int r1_points = 1001;
    int refine_rounds = 2;   // local rounds around each frontier incumbent
    int refine_points = 11;  // per axis, per round
};

struct RegionFrontier {
    Frontier frontier;
    Frontier outer;                     // state-free MAC on the same r1 grid
    std::size_t pentagon_count = 0;
    std::size_t clamped_count = 0;      // pentagons with a negative raw bound
    std::size_t alpha_edge_hits = 0;    // frontier incumbents on the alpha bracket edge
};

RegionFrontier mac_dtc_frontier(const MacParams& prm, const MacDtcGrid& grid = {});
RegionFrontier jdpt_frontier(const MacParams& prm, const JdptGrid& grid = {});

/// Frontier of the state-free MAC region on the given grid.
Frontier outer_frontier(const MacParams& prm, std::span<const double> r1_grid);

} // namespace dtc
