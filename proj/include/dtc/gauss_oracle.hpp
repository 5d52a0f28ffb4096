#pragma once

// Ground-truth mutual information for jointly Gaussian constructions, used to
// audit the closed-form rate expressions.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dtc/mac_regions.hpp"
#include "dtc/rate.hpp"
#include "dtc/rate_core.hpp"

namespace dtc {

enum class Var { U, U1, U2, S, Z, X, X1, X2, Y };

const char* to_string(Var v);

using VarSet = std::vector<Var>;

/// Labeled covariance of zero-mean jointly Gaussian variables.
///
/// Symmetric within 1e-9 relative; eigenvalues in [-1e-10, 0) (relative) are
/// accepted as round-off zeros, anything more negative is rejected.
class CovModel {
public:
    CovModel(std::vector<Var> names, Eigen::MatrixXd cov);

    /// Variables = mixing * basis, basis ~ N(0, basis_cov).
    static CovModel from_mixing(std::vector<Var> names, const Eigen::MatrixXd& mixing,
                                const Eigen::MatrixXd& basis_cov);

    const std::vector<Var>& names() const { return names_; }
    const Eigen::MatrixXd& matrix() const { return cov_; }

    bool has(Var v) const;
    Eigen::Index index(Var v) const;
    double cov(Var a, Var b) const { return cov_(index(a), index(b)); }
    Eigen::MatrixXd block(std::span<const Var> vars) const;

    /// Y row equals the sum of the X, X1, X2, S, Z rows present (within tol,
    /// relative to the largest variance). True when Y is absent.
    bool output_consistent(double tol = 1e-12) const;

private:
    std::vector<Var> names_;
    Eigen::MatrixXd cov_;
};

/// I(A; B) in nats. Zero-variance members are constants and dropped.
Rate gaussian_mi(const CovModel& cov, const VarSet& a, const VarSet& b);

/// I(A; B | C) in nats. Members of A or B that also appear in C are dropped.
Rate gaussian_cond_mi(const CovModel& cov, const VarSet& a, const VarSet& b, const VarSet& c);

/// X = U - beta S with U ~ N(0, p - beta^2 ps) independent of S, Z; over (U, S, Z, X, Y).
CovModel build_cov_dtc(const SingleUserParams& prm, double beta);

/// Both transmitters causal: Xi = Ui - beta_i S; over (U1, U2, S, Z, X1, X2, Y).
CovModel build_cov_mac_dtc(const MacParams& prm, const MacDtcCoefficients& c);

/// Transmitter 1 noncausal: U1 = X1 + alpha S with X1 ~ N(0, p1) independent
/// of S; transmitter 2 causal: X2 = U2 - beta S. Over (U1, U2, S, Z, X1, X2, Y).
CovModel build_cov_jdpt(const MacParams& prm, const JdptCoefficients& c);

struct Discrepancy {
    std::string bound;
    double closed_form = 0.0;   // nats, before clamping
    double oracle = 0.0;        // nats
    double abs_error = 0.0;
};

struct DiscrepancyReport {
    std::vector<Discrepancy> items;
    double tolerance = 1e-9;

    double worst() const;
    bool pass() const { return worst() <= tolerance; }
};

DiscrepancyReport verify_c1(const SingleUserParams& prm, double beta);
DiscrepancyReport verify_mac_dtc(const MacParams& prm, const MacDtcCoefficients& c);
DiscrepancyReport verify_jdpt(const MacParams& prm, const JdptCoefficients& c);

// ---------------------------------------------------------------------------
// Univariate input laws for the linear-assignment bound

class ScalarDensity {
public:
    virtual ~ScalarDensity() = default;

    virtual std::string name() const = 0;
    virtual double pdf(double u) const = 0;
    virtual double lo() const = 0;
    virtual double hi() const = 0;
    virtual double variance() const = 0;
    /// Interior points where pdf is not smooth.
    virtual std::vector<double> kinks() const { return {}; }

    /// Integral of pdf over the support.
    virtual double mass() const;

    /// Density of U + N(0, sigma^2) at y.
    virtual double smoothed_pdf(double y, double sigma) const;
};

class GaussianDensity final : public ScalarDensity {
public:
    explicit GaussianDensity(double variance);
    std::string name() const override { return "gaussian"; }
    double pdf(double u) const override;
    double lo() const override { return -12.0 * sd_; }
    double hi() const override { return 12.0 * sd_; }
    double variance() const override { return sd_ * sd_; }

private:
    double sd_;
};

class UniformDensity final : public ScalarDensity {
public:
    explicit UniformDensity(double variance);
    std::string name() const override { return "uniform"; }
    double pdf(double u) const override;
    double lo() const override { return -half_; }
    double hi() const override { return half_; }
    double variance() const override { return half_ * half_ / 3.0; }

private:
    double half_;
};

/// Symmetric triangle on [-c, c].
class TriangularDensity final : public ScalarDensity {
public:
    explicit TriangularDensity(double variance);
    std::string name() const override { return "triangular"; }
    double pdf(double u) const override;
    double lo() const override { return -half_; }
    double hi() const override { return half_; }
    double variance() const override { return half_ * half_ / 6.0; }
    std::vector<double> kinks() const override { return {0.0}; }

private:
    double half_;
};

/// Equiprobable atoms at +-a (no Lebesgue density; pdf is zero).
class TwoPointDensity final : public ScalarDensity {
public:
    explicit TwoPointDensity(double variance);
    std::string name() const override { return "two-point"; }
    double pdf(double) const override { return 0.0; }
    double lo() const override { return -a_; }
    double hi() const override { return a_; }
    double variance() const override { return a_ * a_; }
    double mass() const override { return 1.0; }
    double smoothed_pdf(double y, double sigma) const override;

private:
    double a_;
};

/// I(U; U + (1-beta)S + Z) for U ~ density independent of (S, Z): h(Y) by
/// quadrature minus the Gaussian entropy of (1-beta)S + Z.
///
/// Requires Var(U) <= p - beta^2 ps. Throws NumericalError when the
/// estimated quadrature error exceeds 1e-7 nats.
Rate mi_linear_assignment_quadrature(const ScalarDensity& u, double beta, const SingleUserParams& prm);

// ---------------------------------------------------------------------------
// Property checks

struct LinearInputRow {
    std::string density;
    double beta = 0.0;
    double mi = 0.0;      // nats
    double bound = 0.0;   // c1, nats
};

struct LinearInputReport {
    std::vector<LinearInputRow> rows;
    double tolerance = 1e-6;

    double worst_margin() const;  // max(mi - bound)
    bool pass() const { return worst_margin() <= tolerance; }
};

/// Uniform, triangular, two-point and Gaussian inputs at full admissible
/// variance, for beta in {0, beta*/2, beta*}.
LinearInputReport linear_input_check(const SingleUserParams& prm);

struct GaussianTripleTrial {
    double beta_star = 0.0;      // -E[XS]/ps
    double mi = 0.0;             // I(U; Y), nats
    double compensation = 0.0;   // c1 expression at beta_star, nats
    double bound = 0.0;          // c1(p), nats
};

/// Evaluates one jointly Gaussian (X, S, U) with covariance `xsu` (order X, S, U).
GaussianTripleTrial gaussian_triple_trial(const SingleUserParams& prm, const Eigen::Matrix3d& xsu);

struct TripleSpec {
    double u_variance_lo = 0.1;
    double u_variance_hi = 10.0;
};

/// Random jointly Gaussian (X, S, U) with U independent of S, Var S = ps and
/// E[X^2] = p exactly.
Eigen::Matrix3d random_triple(const SingleUserParams& prm, const TripleSpec& spec, std::uint64_t seed,
                              std::uint64_t trial);

struct GaussianTripleReport {
    std::size_t trials = 0;
    std::size_t violations = 0;
    double worst_margin = -1e300;   // max(mi - c1)
    double tolerance = 1e-9;

    bool pass() const { return violations == 0; }
};

GaussianTripleReport gaussian_triple_check(const SingleUserParams& prm, const TripleSpec& spec,
                                       std::size_t trials, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Monte Carlo

struct McEstimate {
    double nats = 0.0;
    double stderr_nats = 0.0;   // grouped jackknife (100 groups)
    std::size_t samples = 0;
};

/// Plug-in Gaussian MI from the sample covariance of n draws. n >= 1000.
McEstimate mc_estimate_mi(const CovModel& cov, const VarSet& a, const VarSet& b, std::size_t n,
                          std::uint64_t seed);

struct McCheck {
    std::string name;
    double analytic = 0.0;   // nats
    McEstimate estimate;

    /// |estimate - analytic| in standard errors.
    double z() const;
};

/// Three fixed constructions: I(U;Y) for the single-user channel at beta*,
/// I(U1,U2;Y) for the causal MAC, and I(U1;Y,U2) for the mixed MAC.
std::vector<McCheck> mc_consistency_check(std::size_t n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Seeded suites over random parameter draws

struct SuiteResult {
    std::string name;
    std::size_t trials = 0;
    std::size_t failures = 0;
    double worst = 0.0;
    double tolerance = 0.0;
    std::string note;
    std::vector<std::pair<std::string, double>> per_bound;   // worst |error| per bound

    bool pass() const { return failures == 0; }
};

/// c1_inner against I(U;Y) for random (p, ps, pz, beta).
SuiteResult verify_c1_suite(std::size_t trials, std::uint64_t seed);
/// MAC dirty tape pentagon bounds against the causal-CSI information bounds.
SuiteResult verify_mac_dtc_suite(std::size_t trials, std::uint64_t seed);
/// Mixed noncausal/causal pentagon bounds against their binning information bounds.
SuiteResult verify_jdpt_suite(std::size_t trials, std::uint64_t seed);

} // namespace dtc
