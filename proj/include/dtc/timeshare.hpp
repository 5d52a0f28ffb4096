#pragma once

// Two-mode time sharing over rate-power curves, and the upper concave envelope
// used to cross-check it.

#include <functional>
#include <vector>

#include "dtc/rate.hpp"
#include "dtc/rate_core.hpp"

namespace dtc {

/// Rate achieved with a given transmit power, for fixed (ps, pz).
/// Must be deterministic, nondecreasing, and vanish at zero power.
using RateFunction = std::function<Rate(double power)>;

/// Grid-then-refine resolution for the (lambda, xi) search.
struct TimeShareGrid {
    int points = 101;        // per axis, every round
    int refinements = 2;     // local rounds after the global grid
    double shrink = 10.0;    // window shrink factor per round
    int edge_rounds = 12;    // extra rounds while the incumbent is one step from a boundary
};

struct TimeShareSolution {
    Rate rate;
    double lambda = 1.0;     // time fraction of the first mode
    double xi = 1.0;         // power fraction of the first mode
};

/// lambda*f(xi*p/lambda) + (1-lambda)*g((1-xi)*p/(1-lambda)); a term whose time
/// fraction is zero contributes zero.
Rate timeshare_objective(const RateFunction& f, const RateFunction& g, double p, double lambda, double xi);

/// Best two-mode split of power p between f and g. Ties within 1e-12 nats keep
/// the point closest to lambda = xi = 1 (no time sharing).
TimeShareSolution two_mode_timeshare(const RateFunction& f, const RateFunction& g, double p,
                                     const TimeShareGrid& grid = {});

/// c1 as a RateFunction with (ps, pz) bound.
RateFunction c1_curve(double ps, double pz);
RateFunction c3_curve(double pz);

/// Time sharing between two compensation modes.
TimeShareSolution c2(const SingleUserParams& prm, const TimeShareGrid& grid = {});

/// c2 tabulated on a geometric power grid, linearly interpolated in power.
///
/// Nodes hold exact c2 values. Below the first node the curve is the chord
/// from the origin; above the last node c2 is evaluated directly. Chords sit
/// below c2 wherever it is concave.
class CompensationTable {
public:
    CompensationTable(double ps, double pz, double power_lo, double power_hi,
                      double node_ratio = 1.02, const TimeShareGrid& grid = {});

    Rate operator()(double power) const;

    /// Copy with an extra exact node at `power`.
    CompensationTable with_node(double power) const;

    double ps() const { return ps_; }
    double pz() const { return pz_; }
    double power_lo() const { return power_.front(); }
    double power_hi() const { return power_.back(); }
    std::size_t size() const { return power_.size(); }

private:
    double exact(double power) const;

    double ps_;
    double pz_;
    TimeShareGrid grid_;
    std::vector<double> power_;
    std::vector<double> value_;
};

/// Time sharing between the c2 scheme and the inflated lattice (c3).
/// Builds a CompensationTable spanning [1e-6*min(p,pz), 1e4*max(p,pz)].
TimeShareSolution c4(const SingleUserParams& prm, const TimeShareGrid& grid = {});

/// As above with a caller-supplied table (must match prm.ps and prm.pz).
TimeShareSolution c4(const SingleUserParams& prm, const CompensationTable& table,
                     const TimeShareGrid& grid = {});

/// Sorted support points for the envelope oracle, starting at 0.
struct SupportGrid {
    std::vector<double> points;

    /// Half linear on [0, p_max], half geometric on [1e-6 p_max, p_max].
    static SupportGrid mixed(double p_max, int n = 10000);
};

/// Default support for c1-type curves: [0, max(2p, 4(ps+pz))].
SupportGrid default_envelope_support(const SingleUserParams& prm);

/// Least concave majorant of f, sampled on the support grid, evaluated at p.
Rate upper_concave_envelope(const RateFunction& f, double p, const SupportGrid& support);

} // namespace dtc
