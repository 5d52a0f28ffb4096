#include "dtc/mac_regions.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace dtc {

namespace {

std::vector<double> linspace(double lo, double hi, int n)
{
    if (n < 1) throw ParameterError("grid needs at least one point");
    if (n == 1 || lo == hi) return {lo};
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    v.back() = hi;
    return v;
}

double face_value(const Pentagon& pg, double r1)
{
    return std::max(0.0, std::min(pg.r2_max.nats(), pg.r_sum.nats() - r1));
}

} // namespace

std::optional<double> Frontier::r2_at(double r1) const
{
    const auto it = std::lower_bound(points.begin(), points.end(), r1,
                                     [](const RatePoint& p, double v) { return p.r1 < v; });
    if (it == points.end() || it->r1 != r1) return std::nullopt;
    return it->r2;
}

std::vector<double> uniform_grid(double hi, int n)
{
    if (!(hi >= 0.0) || !std::isfinite(hi)) throw ParameterError("r1 grid upper end must be finite and >= 0");
    if (n < 2) throw ParameterError("r1 grid needs at least two points");
    return linspace(0.0, hi, n);
}

Frontier frontier_union(std::span<const Pentagon> pentagons, std::span<const double> r1_grid,
                        std::vector<std::size_t>* best_index)
{
    if (pentagons.empty()) throw ParameterError("frontier of an empty pentagon set");
    if (!std::is_sorted(r1_grid.begin(), r1_grid.end()))
        throw ParameterError("r1 grid must be sorted");

    double reach = 0.0;
    for (const auto& pg : pentagons) reach = std::max(reach, pg.r1_max.nats());

    std::vector<double> r1s;
    for (double r1 : r1_grid)
        if (r1 >= 0.0 && r1 <= reach && (r1s.empty() || r1 > r1s.back())) r1s.push_back(r1);
    if (r1s.empty() || r1s.back() < reach) r1s.push_back(reach);

    Frontier out;
    out.points.reserve(r1s.size());
    if (best_index) best_index->assign(r1s.size(), 0);
    for (std::size_t k = 0; k < r1s.size(); ++k) {
        const double r1 = r1s[k];
        double best = -1.0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < pentagons.size(); ++i) {
            const auto& pg = pentagons[i];
            if (pg.r1_max.nats() < r1) continue;
            const double v = face_value(pg, r1);
            if (v > best) {
                best = v;
                arg = i;
            }
        }
        out.points.push_back({r1, best});
        if (best_index) (*best_index)[k] = arg;
    }
    return out;
}

Frontier frontier_union(std::span<const Pentagon> pentagons)
{
    double reach = 0.0;
    for (const auto& pg : pentagons) reach = std::max(reach, pg.r1_max.nats());
    const auto grid = uniform_grid(reach, 1001);
    return frontier_union(pentagons, grid);
}

Frontier outer_frontier(const MacParams& prm, std::span<const double> r1_grid)
{
    const Pentagon outer = gaussian_mac_capacity_pentagon(prm);
    return frontier_union(std::span<const Pentagon>(&outer, 1), r1_grid);
}

RegionFrontier mac_dtc_frontier(const MacParams& prm, const MacDtcGrid& grid)
{
    validate(prm);
    if (grid.beta_points < 1) throw ParameterError("beta grid needs at least one point");
    const auto b1 = linspace(0.0, max_compensation(prm.p1, prm.ps), grid.beta_points);
    const auto b2 = linspace(0.0, max_compensation(prm.p2, prm.ps), grid.beta_points);

    RegionFrontier out;
    std::vector<Pentagon> pentagons;
    pentagons.reserve(b1.size() * b2.size());
    for (double beta1 : b1)
        for (double beta2 : b2) {
            const auto raw = mac_dtc_bounds(prm, MacDtcCoefficients{beta1, beta2});
            if (raw.any_negative()) ++out.clamped_count;
            pentagons.push_back(Pentagon::clamped(raw));
        }

    const auto r1_grid = uniform_grid(gaussian_mac_capacity_pentagon(prm).r1_max.nats(), grid.r1_points);
    out.frontier = frontier_union(pentagons, r1_grid);
    out.outer = outer_frontier(prm, r1_grid);
    out.pentagon_count = pentagons.size();
    return out;
}

RegionFrontier jdpt_frontier(const MacParams& prm, const JdptGrid& grid)
{
    validate(prm);
    if (!(grid.alpha_lo <= grid.alpha_hi) || !std::isfinite(grid.alpha_lo) || !std::isfinite(grid.alpha_hi))
        throw ParameterError("alpha bracket must be finite with lo <= hi");
    if (grid.alpha_points < 1 || grid.beta_points < 1 || grid.refine_rounds < 0 || grid.refine_points < 2)
        throw ParameterError("invalid jdpt grid resolution");

    const double beta_hi = max_compensation(prm.p2, prm.ps);
    // With p1 = 0 only alpha = 0 is admissible.
    const auto alphas = prm.p1 > 0 ? linspace(grid.alpha_lo, grid.alpha_hi, grid.alpha_points) : std::vector<double>{0.0};
    const auto betas = linspace(-beta_hi, beta_hi, grid.beta_points);

    RegionFrontier out;
    std::vector<Pentagon> pentagons;
    std::vector<JdptCoefficients> coeffs;
    const auto add = [&](JdptCoefficients c) {
        const auto raw = jdpt_bounds(prm, c);
        if (raw.any_negative()) ++out.clamped_count;
        pentagons.push_back(Pentagon::clamped(raw));
        coeffs.push_back(c);
    };
    for (double a : alphas)
        for (double b : betas) add({a, b});
    const std::size_t grid_count = pentagons.size();

    const auto r1_grid = uniform_grid(gaussian_mac_capacity_pentagon(prm).r1_max.nats(), grid.r1_points);
    std::vector<std::size_t> best;
    out.frontier = frontier_union(pentagons, r1_grid, &best);

    for (std::size_t idx : best) {
        const double a = coeffs[idx].alpha;
        if (idx < grid_count && alphas.size() > 1 && (a == grid.alpha_lo || a == grid.alpha_hi)) ++out.alpha_edge_hits;
    }

    // Local polish around each incumbent; the union only grows.
    double half_a = alphas.size() > 1 ? alphas[1] - alphas[0] : 0.0;
    double half_b = betas.size() > 1 ? betas[1] - betas[0] : 0.0;
    for (int round = 0; round < grid.refine_rounds; ++round) {
        const std::set<std::size_t> incumbents(best.begin(), best.end());
        for (std::size_t idx : incumbents) {
            const auto c = coeffs[idx];
            for (int i = 0; i < grid.refine_points; ++i) {
                const double a = prm.p1 > 0 ? c.alpha - half_a + 2.0 * half_a * i / (grid.refine_points - 1) : 0.0;
                for (int j = 0; j < grid.refine_points; ++j) {
                    const double b = std::clamp(c.beta - half_b + 2.0 * half_b * j / (grid.refine_points - 1),
                                                -beta_hi, beta_hi);
                    add({a, b});
                }
            }
        }
        half_a *= 2.0 / (grid.refine_points - 1);
        half_b *= 2.0 / (grid.refine_points - 1);
        out.frontier = frontier_union(pentagons, r1_grid, &best);
    }

    out.outer = outer_frontier(prm, r1_grid);
    out.pentagon_count = pentagons.size();
    return out;
}

} // namespace dtc
