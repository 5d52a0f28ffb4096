#pragma once

#include <functional>
#include <span>

namespace dtc {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;   // sum of |Kronrod - Gauss| over accepted panels
    int evaluations = 0;
    bool converged = true;  // false if a panel hit max_depth
};

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_depth = 40;
};

/// Adaptive 7/15-point Gauss-Kronrod on [a, b] with recursive bisection.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opt = {});

/// Sum of `integrate` over the pieces of [a, b] cut at the given breakpoints.
QuadratureResult integrate_pieces(const std::function<double(double)>& f, double a, double b,
                                  std::span<const double> breakpoints, const QuadratureOptions& opt = {});

} // namespace dtc
