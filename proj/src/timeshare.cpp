#include "dtc/timeshare.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

namespace dtc {

namespace {

constexpr double kTieTolerance = 1e-12;

void require_power(double p)
{
    if (!std::isfinite(p) || p < 0) throw ParameterError("power must be finite and >= 0");
}

double mode_term(const RateFunction& f, double time, double power)
{
    if (time <= 0.0) return 0.0;
    return time * f(power / time).nats();
}

// Window of width `width` around `center`, kept inside [0, 1].
std::pair<double, double> window(double center, double width)
{
    if (width >= 1.0) return {0.0, 1.0};
    const double lo = std::clamp(center - 0.5 * width, 0.0, 1.0 - width);
    return {lo, lo + width};
}

// Incumbent sits on the first grid step next to a boundary: the optimum may
// lie closer to the boundary than the grid resolves.
bool near_edge(const TimeShareSolution& s, double step)
{
    for (double v : {s.lambda, 1.0 - s.lambda, s.xi, 1.0 - s.xi})
        if (v > 0.0 && v <= step * (1.0 + 1e-9)) return true;
    return false;
}

} // namespace

Rate timeshare_objective(const RateFunction& f, const RateFunction& g, double p, double lambda, double xi)
{
    require_power(p);
    if (!(lambda >= 0.0 && lambda <= 1.0) || !(xi >= 0.0 && xi <= 1.0))
        throw ParameterError("lambda and xi must lie in [0, 1]");
    return Rate::nats(mode_term(f, lambda, xi * p) + mode_term(g, 1.0 - lambda, (1.0 - xi) * p));
}

TimeShareSolution two_mode_timeshare(const RateFunction& f, const RateFunction& g, double p,
                                     const TimeShareGrid& grid)
{
    require_power(p);
    if (grid.points < 2 || grid.refinements < 0 || grid.edge_rounds < 0 || !(grid.shrink > 1.0))
        throw ParameterError("time-share grid needs >= 2 points, >= 0 refinements, shrink > 1");

    TimeShareSolution best{timeshare_objective(f, g, p, 1.0, 1.0), 1.0, 1.0};
    if (p == 0.0) return best;

    const double n = grid.points - 1;
    double width = 1.0;
    const auto scan = [&] {
        const auto [lam_lo, lam_hi] = window(best.lambda, width);
        const auto [xi_lo, xi_hi] = window(best.xi, width);
        // Ties go to the point closest to (1, 1); for identical modes this
        // picks one of the two mirror solutions deterministically.
        for (int i = grid.points - 1; i >= 0; --i) {
            const double lambda = lam_lo + (lam_hi - lam_lo) * (i / n);
            for (int j = grid.points - 1; j >= 0; --j) {
                const double xi = xi_lo + (xi_hi - xi_lo) * (j / n);
                const Rate r = timeshare_objective(f, g, p, lambda, xi);
                const double gain = r.nats() - best.rate.nats();
                const bool closer = (2.0 - lambda - xi) < (2.0 - best.lambda - best.xi);
                if (gain > kTieTolerance || (gain >= -kTieTolerance && closer)) best = {r, lambda, xi};
            }
        }
    };
    for (int round = 0; round <= grid.refinements; ++round) {
        scan();
        width /= grid.shrink;
    }
    for (int extra = 0; extra < grid.edge_rounds && near_edge(best, width * grid.shrink / n); ++extra) {
        scan();
        width /= grid.shrink;
    }
    return best;
}

RateFunction c1_curve(double ps, double pz)
{
    return [ps, pz](double power) { return c1(SingleUserParams{power, ps, pz}); };
}

RateFunction c3_curve(double pz)
{
    return [pz](double power) { return c3(SingleUserParams{power, 0.0, pz}); };
}

TimeShareSolution c2(const SingleUserParams& prm, const TimeShareGrid& grid)
{
    validate(prm);
    const RateFunction f = c1_curve(prm.ps, prm.pz);
    return two_mode_timeshare(f, f, prm.p, grid);
}

CompensationTable::CompensationTable(double ps, double pz, double power_lo, double power_hi,
                                     double node_ratio, const TimeShareGrid& grid)
    : ps_(ps), pz_(pz), grid_(grid)
{
    validate(SingleUserParams{0.0, ps, pz});
    if (!(power_lo > 0.0) || !(power_hi > power_lo) || !std::isfinite(power_hi))
        throw ParameterError("compensation table needs 0 < power_lo < power_hi < inf");
    if (!(node_ratio > 1.0)) throw ParameterError("compensation table node ratio must exceed 1");

    const auto n = static_cast<std::size_t>(std::ceil(std::log(power_hi / power_lo) / std::log(node_ratio))) + 1;
    power_.reserve(n);
    value_.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double x = k + 1 == n ? power_hi : power_lo * std::pow(node_ratio, static_cast<double>(k));
        power_.push_back(x);
        value_.push_back(exact(x));
    }
}

double CompensationTable::exact(double power) const
{
    return c2(SingleUserParams{power, ps_, pz_}, grid_).rate.nats();
}

Rate CompensationTable::operator()(double power) const
{
    require_power(power);
    if (power == 0.0) return Rate{};
    if (power < power_.front()) return Rate::nats(value_.front() * (power / power_.front()));
    if (power > power_.back()) return Rate::nats(exact(power));

    const auto hi = std::lower_bound(power_.begin(), power_.end(), power);
    const auto k = static_cast<std::size_t>(std::distance(power_.begin(), hi));
    if (power_[k] == power || k == 0) return Rate::nats(value_[k]);
    const double t = (power - power_[k - 1]) / (power_[k] - power_[k - 1]);
    return Rate::nats(value_[k - 1] + t * (value_[k] - value_[k - 1]));
}

CompensationTable CompensationTable::with_node(double power) const
{
    require_power(power);
    CompensationTable out = *this;
    if (power <= 0.0) return out;
    const auto it = std::lower_bound(out.power_.begin(), out.power_.end(), power);
    if (it != out.power_.end() && *it == power) return out;
    const auto k = std::distance(out.power_.begin(), it);
    out.power_.insert(it, power);
    out.value_.insert(out.value_.begin() + k, exact(power));
    return out;
}

TimeShareSolution c4(const SingleUserParams& prm, const TimeShareGrid& grid)
{
    validate(prm);
    if (prm.p == 0.0) return {Rate{}, 1.0, 1.0};
    const CompensationTable table(prm.ps, prm.pz, 1e-6 * std::min(prm.p, prm.pz),
                                  1e4 * std::max(prm.p, prm.pz), 1.02, grid);
    return c4(prm, table, grid);
}

TimeShareSolution c4(const SingleUserParams& prm, const CompensationTable& table, const TimeShareGrid& grid)
{
    validate(prm);
    if (table.ps() != prm.ps || table.pz() != prm.pz)
        throw ParameterError("compensation table built for different (ps, pz)");
    if (prm.p == 0.0) return {Rate{}, 1.0, 1.0};

    // Exact node at p keeps the lambda = xi = 1 corner equal to c2(p).
    const CompensationTable pinned = table.with_node(prm.p);
    const RateFunction f = [&pinned](double power) { return pinned(power); };
    return two_mode_timeshare(f, c3_curve(prm.pz), prm.p, grid);
}

SupportGrid SupportGrid::mixed(double p_max, int n)
{
    if (!(p_max > 0.0) || !std::isfinite(p_max) || n < 4)
        throw ParameterError("support grid needs finite p_max > 0 and at least 4 points");
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(n) + 1);
    const int n_lin = n / 2;
    const int n_log = n - n_lin;
    for (int i = 0; i < n_lin; ++i) pts.push_back(p_max * i / (n_lin - 1));
    const double lo = 1e-6 * p_max;
    for (int i = 0; i < n_log; ++i) pts.push_back(lo * std::pow(p_max / lo, static_cast<double>(i) / (n_log - 1)));
    pts.back() = p_max;
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return SupportGrid{std::move(pts)};
}

SupportGrid default_envelope_support(const SingleUserParams& prm)
{
    validate(prm);
    return SupportGrid::mixed(std::max(2.0 * prm.p, 4.0 * (prm.ps + prm.pz)));
}

Rate upper_concave_envelope(const RateFunction& f, double p, const SupportGrid& support)
{
    const auto& xs = support.points;
    if (xs.size() < 2 || !std::is_sorted(xs.begin(), xs.end()))
        throw ParameterError("support grid must be sorted with at least two points");
    if (!(p >= xs.front() && p <= xs.back()))
        throw ParameterError("power outside the envelope support grid");

    // Upper hull by monotone chain over the sampled graph.
    std::vector<std::pair<double, double>> hull;
    hull.reserve(xs.size());
    for (double x : xs) {
        const std::pair<double, double> pt{x, f(x).nats()};
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            const double cross = (b.first - a.first) * (pt.second - a.second) - (b.second - a.second) * (pt.first - a.first);
            if (cross >= 0.0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(pt);
    }

    const auto it = std::lower_bound(hull.begin(), hull.end(), p,
                                     [](const auto& h, double v) { return h.first < v; });
    if (it->first == p || it == hull.begin()) return Rate::nats(it->second);
    const auto& a = *(it - 1);
    const auto& b = *it;
    const double t = (p - a.first) / (b.first - a.first);
    return Rate::nats(a.second + t * (b.second - a.second));
}

} // namespace dtc
