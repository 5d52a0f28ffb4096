#include "dtc/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace dtc {

namespace {

// Kronrod abscissae (descending, last is the centre) and weights; the Gauss
// rule uses the odd-indexed abscissae.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double kronrod;
    double gauss;
};

Panel gk15(const std::function<double(double)>& f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double k = kWgk[7] * fc;
    double g = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kXgk[i];
        const double s = f(c - dx) + f(c + dx);
        k += kWgk[i] * s;
        if (i % 2 == 1) g += kWg[i / 2] * s;
    }
    return {k * h, g * h};
}

void adapt(const std::function<double(double)>& f, double a, double b, double total_width,
           const QuadratureOptions& opt, int depth, QuadratureResult& acc)
{
    const Panel p = gk15(f, a, b);
    acc.evaluations += 15;
    const double err = std::abs(p.kronrod - p.gauss);
    const double tol = std::max(opt.abs_tol * (b - a) / total_width, opt.rel_tol * std::abs(p.kronrod));
    if (err <= tol || depth >= opt.max_depth) {
        if (err > tol) acc.converged = false;
        acc.value += p.kronrod;
        acc.error += err;
        return;
    }
    const double m = 0.5 * (a + b);
    adapt(f, a, m, total_width, opt, depth + 1, acc);
    adapt(f, m, b, total_width, opt, depth + 1, acc);
}

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opt)
{
    QuadratureResult acc;
    if (a == b) return acc;
    if (b < a) {
        acc = integrate(f, b, a, opt);
        acc.value = -acc.value;
        return acc;
    }
    adapt(f, a, b, b - a, opt, 0, acc);
    return acc;
}

QuadratureResult integrate_pieces(const std::function<double(double)>& f, double a, double b,
                                  std::span<const double> breakpoints, const QuadratureOptions& opt)
{
    std::vector<double> cuts{a};
    for (double x : breakpoints)
        if (x > a && x < b) cuts.push_back(x);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());

    QuadratureResult acc;
    const double total = b - a;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double w = cuts[i + 1] - cuts[i];
        if (w <= 0.0) continue;
        QuadratureOptions local = opt;
        local.abs_tol = opt.abs_tol * w / total;
        const auto r = integrate(f, cuts[i], cuts[i + 1], local);
        acc.value += r.value;
        acc.error += r.error;
        acc.evaluations += r.evaluations;
        acc.converged = acc.converged && r.converged;
    }
    return acc;
}

} // namespace dtc
