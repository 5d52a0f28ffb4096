#include "dtc/gauss_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "dtc/counter_rng.hpp"
#include "dtc/quadrature.hpp"

namespace dtc {

namespace {

// Pivots (or variances) below this fraction of the largest diagonal entry are
// treated as exact zeros.
constexpr double kDegenerate = 1e-12;
constexpr double kPsdTolerance = 1e-10;

using Eigen::Index;
using Eigen::MatrixXd;

double log_det(const MatrixXd& m)
{
    if (m.rows() == 0) return 0.0;
    const double scale = std::max(m.diagonal().maxCoeff(), 0.0);
    Eigen::LDLT<MatrixXd> ldlt(m);
    if (ldlt.info() != Eigen::Success) throw DegeneracyError("LDLT factorization failed");
    double acc = 0.0;
    for (Index i = 0; i < ldlt.vectorD().size(); ++i) {
        const double d = ldlt.vectorD()(i);
        if (!(d > kDegenerate * scale)) throw DegeneracyError("singular covariance block");
        acc += std::log(d);
    }
    return acc;
}

bool contains(const VarSet& s, Var v) { return std::find(s.begin(), s.end(), v) != s.end(); }

// Drops constants and duplicates, checks presence.
VarSet effective(const CovModel& cov, const VarSet& vars, const VarSet& exclude = {})
{
    const double scale = std::max(1.0, cov.matrix().diagonal().maxCoeff());
    VarSet out;
    for (Var v : vars) {
        if (!cov.has(v)) throw ParameterError(std::string("variable ") + to_string(v) + " not in covariance model");
        if (contains(exclude, v) || contains(out, v)) continue;
        if (cov.cov(v, v) <= kDegenerate * scale) continue;
        out.push_back(v);
    }
    return out;
}

VarSet join(VarSet a, const VarSet& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

double block_log_det(const CovModel& cov, const VarSet& vars) { return log_det(cov.block(vars)); }

Rate clamp_mi(double v)
{
    if (v < 0.0) {
        if (v < -1e-12) throw NumericalError("mutual information evaluated to " + std::to_string(v));
        v = 0.0;
    }
    return Rate::nats(v);
}

double normal_pdf(double x, double sigma)
{
    const double z = x / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

double gaussian_entropy(double variance) { return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * variance); }

void require_variance(double v)
{
    if (!std::isfinite(v) || v < 0.0) throw ParameterError("density variance must be finite and >= 0");
}

} // namespace

const char* to_string(Var v)
{
    switch (v) {
    case Var::U: return "U";
    case Var::U1: return "U1";
    case Var::U2: return "U2";
    case Var::S: return "S";
    case Var::Z: return "Z";
    case Var::X: return "X";
    case Var::X1: return "X1";
    case Var::X2: return "X2";
    case Var::Y: return "Y";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// CovModel

CovModel::CovModel(std::vector<Var> names, MatrixXd cov) : names_(std::move(names)), cov_(std::move(cov))
{
    const auto n = static_cast<Index>(names_.size());
    if (cov_.rows() != n || cov_.cols() != n) throw ParameterError("covariance shape does not match labels");
    if (std::set<Var>(names_.begin(), names_.end()).size() != names_.size())
        throw ParameterError("covariance labels must be unique");
    if (!cov_.allFinite()) throw ParameterError("covariance entries must be finite");
    if (n == 0) return;

    const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
    if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw ParameterError("covariance must be symmetric");
    cov_ = 0.5 * (cov_ + cov_.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(cov_);
    const double min_ev = eig.eigenvalues().minCoeff();
    // Smaller negatives are round-off of a singular matrix and stay in place:
    // rebuilding from the eigenbasis would smear exact zeros. Determinants
    // treat them as zero pivots and sampling clamps them.
    if (min_ev < -kPsdTolerance * scale) throw ParameterError("covariance is not positive semidefinite");
}

CovModel CovModel::from_mixing(std::vector<Var> names, const MatrixXd& mixing, const MatrixXd& basis_cov)
{
    if (mixing.cols() != basis_cov.rows() || basis_cov.rows() != basis_cov.cols())
        throw ParameterError("mixing matrix and basis covariance do not conform");
    MatrixXd cov = mixing * basis_cov * mixing.transpose();
    cov = 0.5 * (cov + cov.transpose()).eval();
    return CovModel(std::move(names), std::move(cov));
}

bool CovModel::has(Var v) const { return std::find(names_.begin(), names_.end(), v) != names_.end(); }

Index CovModel::index(Var v) const
{
    const auto it = std::find(names_.begin(), names_.end(), v);
    if (it == names_.end()) throw ParameterError(std::string("variable ") + to_string(v) + " not in covariance model");
    return static_cast<Index>(std::distance(names_.begin(), it));
}

MatrixXd CovModel::block(std::span<const Var> vars) const
{
    const auto n = static_cast<Index>(vars.size());
    MatrixXd out(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) out(i, j) = cov(vars[static_cast<std::size_t>(i)], vars[static_cast<std::size_t>(j)]);
    return out;
}

bool CovModel::output_consistent(double tol) const
{
    if (!has(Var::Y)) return true;
    const double scale = std::max(1.0, cov_.diagonal().maxCoeff());
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(cov_.rows());
    for (Var v : {Var::X, Var::X1, Var::X2, Var::S, Var::Z})
        if (has(v)) sum += cov_.col(index(v));
    return (sum - cov_.col(index(Var::Y))).cwiseAbs().maxCoeff() <= tol * scale;
}

// ---------------------------------------------------------------------------
// Information measures

Rate gaussian_mi(const CovModel& cov, const VarSet& a, const VarSet& b)
{
    return gaussian_cond_mi(cov, a, b, {});
}

Rate gaussian_cond_mi(const CovModel& cov, const VarSet& a, const VarSet& b, const VarSet& c)
{
    for (Var v : a)
        if (contains(b, v)) throw ParameterError("groups A and B must be disjoint");
    const VarSet cc = effective(cov, c);
    const VarSet aa = effective(cov, a, c);
    const VarSet bb = effective(cov, b, c);
    if (aa.empty() || bb.empty()) return Rate{};

    const double ac = block_log_det(cov, join(aa, cc));
    const double bc = block_log_det(cov, join(bb, cc));
    const double abc = block_log_det(cov, join(join(aa, bb), cc));
    const double lc = block_log_det(cov, cc);
    return clamp_mi(0.5 * (ac + bc - abc - lc));
}

CovModel build_cov_dtc(const SingleUserParams& prm, double beta)
{
    validate(prm);
    validate_beta(prm, beta);
    Eigen::Vector3d basis(std::max(0.0, prm.p - beta * beta * prm.ps), prm.ps, prm.pz);
    MatrixXd mix(5, 3);
    // basis: U, S, Z
    mix << 1, 0, 0,            // U
           0, 1, 0,            // S
           0, 0, 1,            // Z
           1, -beta, 0,        // X = U - beta S
           1, 1 - beta, 1;     // Y = X + S + Z
    return CovModel::from_mixing({Var::U, Var::S, Var::Z, Var::X, Var::Y}, mix, basis.asDiagonal().toDenseMatrix());
}

CovModel build_cov_mac_dtc(const MacParams& prm, const MacDtcCoefficients& c)
{
    validate(prm, c);
    Eigen::Vector4d basis(std::max(0.0, prm.p1 - c.beta1 * c.beta1 * prm.ps),
                          std::max(0.0, prm.p2 - c.beta2 * c.beta2 * prm.ps), prm.ps, prm.pz);
    MatrixXd mix(7, 4);
    // basis: U1, U2, S, Z
    mix << 1, 0, 0, 0,
           0, 1, 0, 0,
           0, 0, 1, 0,
           0, 0, 0, 1,
           1, 0, -c.beta1, 0,
           0, 1, -c.beta2, 0,
           1, 1, 1 - c.beta1 - c.beta2, 1;
    return CovModel::from_mixing({Var::U1, Var::U2, Var::S, Var::Z, Var::X1, Var::X2, Var::Y}, mix,
                                 basis.asDiagonal().toDenseMatrix());
}

CovModel build_cov_jdpt(const MacParams& prm, const JdptCoefficients& c)
{
    validate(prm, c);
    Eigen::Vector4d basis(prm.p1, std::max(0.0, prm.p2 - c.beta * c.beta * prm.ps), prm.ps, prm.pz);
    MatrixXd mix(7, 4);
    // basis: X1, U2, S, Z
    mix << 1, 0, c.alpha, 0,        // U1 = X1 + alpha S
           0, 1, 0, 0,
           0, 0, 1, 0,
           0, 0, 0, 1,
           1, 0, 0, 0,
           0, 1, -c.beta, 0,        // X2 = U2 - beta S
           1, 1, 1 - c.beta, 1;
    return CovModel::from_mixing({Var::U1, Var::U2, Var::S, Var::Z, Var::X1, Var::X2, Var::Y}, mix,
                                 basis.asDiagonal().toDenseMatrix());
}

double DiscrepancyReport::worst() const
{
    double w = 0.0;
    for (const auto& d : items) w = std::max(w, d.abs_error);
    return w;
}

namespace {

void add_item(DiscrepancyReport& r, std::string name, double closed, double oracle)
{
    r.items.push_back({std::move(name), closed, oracle, std::abs(closed - oracle)});
}

} // namespace

DiscrepancyReport verify_c1(const SingleUserParams& prm, double beta)
{
    const CovModel cov = build_cov_dtc(prm, beta);
    DiscrepancyReport r;
    add_item(r, "I(U;Y)", c1_inner(prm, beta).nats(), gaussian_mi(cov, {Var::U}, {Var::Y}).nats());
    return r;
}

DiscrepancyReport verify_mac_dtc(const MacParams& prm, const MacDtcCoefficients& c)
{
    const auto closed = mac_dtc_bounds(prm, c);
    const CovModel cov = build_cov_mac_dtc(prm, c);
    DiscrepancyReport r;
    add_item(r, "R1<=I(U1;Y|U2)", closed.r1, gaussian_cond_mi(cov, {Var::U1}, {Var::Y}, {Var::U2}).nats());
    add_item(r, "R2<=I(U2;Y|U1)", closed.r2, gaussian_cond_mi(cov, {Var::U2}, {Var::Y}, {Var::U1}).nats());
    add_item(r, "R1+R2<=I(U1,U2;Y)", closed.sum, gaussian_mi(cov, {Var::U1, Var::U2}, {Var::Y}).nats());
    return r;
}

DiscrepancyReport verify_jdpt(const MacParams& prm, const JdptCoefficients& c)
{
    const auto closed = jdpt_bounds(prm, c);
    const CovModel cov = build_cov_jdpt(prm, c);
    const double binning = gaussian_mi(cov, {Var::U1}, {Var::S}).nats();
    DiscrepancyReport r;
    add_item(r, "R1<=I(U1;Y|U2)-I(U1;S)", closed.r1,
             gaussian_cond_mi(cov, {Var::U1}, {Var::Y}, {Var::U2}).nats() - binning);
    add_item(r, "R2<=I(U2;Y|U1)", closed.r2, gaussian_cond_mi(cov, {Var::U2}, {Var::Y}, {Var::U1}).nats());
    add_item(r, "R1+R2<=I(U1,U2;Y)-I(U1;S)", closed.sum,
             gaussian_mi(cov, {Var::U1, Var::U2}, {Var::Y}).nats() - binning);
    return r;
}

// ---------------------------------------------------------------------------
// Densities

double ScalarDensity::mass() const
{
    if (variance() == 0.0) return 1.0;
    const auto k = kinks();
    return integrate_pieces([this](double u) { return pdf(u); }, lo(), hi(), k, {1e-14, 1e-12, 40}).value;
}

double ScalarDensity::smoothed_pdf(double y, double sigma) const
{
    if (variance() == 0.0) return normal_pdf(y, sigma);
    std::vector<double> cuts = kinks();
    // Localize the Gaussian kernel so the adaptive rule sees its peak.
    for (double k : {-8.0, 0.0, 8.0}) cuts.push_back(y + k * sigma);
    const auto f = [this, y, sigma](double u) { return pdf(u) * normal_pdf(y - u, sigma); };
    return integrate_pieces(f, lo(), hi(), cuts, {1e-16, 1e-11, 40}).value;
}

GaussianDensity::GaussianDensity(double variance)
{
    require_variance(variance);
    sd_ = std::sqrt(variance);
}

double GaussianDensity::pdf(double u) const { return normal_pdf(u, sd_); }

UniformDensity::UniformDensity(double variance)
{
    require_variance(variance);
    half_ = std::sqrt(3.0 * variance);
}

double UniformDensity::pdf(double u) const { return std::abs(u) <= half_ ? 0.5 / half_ : 0.0; }

TriangularDensity::TriangularDensity(double variance)
{
    require_variance(variance);
    half_ = std::sqrt(6.0 * variance);
}

double TriangularDensity::pdf(double u) const
{
    const double a = std::abs(u);
    return a < half_ ? (half_ - a) / (half_ * half_) : 0.0;
}

TwoPointDensity::TwoPointDensity(double variance)
{
    require_variance(variance);
    a_ = std::sqrt(variance);
}

double TwoPointDensity::smoothed_pdf(double y, double sigma) const
{
    return 0.5 * (normal_pdf(y - a_, sigma) + normal_pdf(y + a_, sigma));
}

Rate mi_linear_assignment_quadrature(const ScalarDensity& u, double beta, const SingleUserParams& prm)
{
    validate(prm);
    if (!std::isfinite(beta)) throw ParameterError("beta must be finite");
    const double cap = prm.p - beta * beta * prm.ps;
    const double var_u = u.variance();
    if (var_u > cap + 1e-12 * std::max(1.0, prm.p))
        throw ParameterError("Var(U) exceeds the power left after compensation, p - beta^2 ps");

    const double noise_var = (1.0 - beta) * (1.0 - beta) * prm.ps + prm.pz;
    const double sigma = std::sqrt(noise_var);
    const double sd_total = std::sqrt(var_u + noise_var);
    const double lo = std::min(-10.0 * sd_total, u.lo() - 10.0 * sigma);
    const double hi = std::max(10.0 * sd_total, u.hi() + 10.0 * sigma);

    const auto integrand = [&u, sigma](double y) {
        const double f = u.smoothed_pdf(y, sigma);
        return f > 0.0 ? -f * std::log(f) : 0.0;
    };
    std::vector<double> cuts{0.0, u.lo(), u.hi()};
    for (double k : u.kinks()) cuts.push_back(k);
    const auto h = integrate_pieces(integrand, lo, hi, cuts, {1e-10, 1e-12, 30});
    if (!h.converged || h.error > 1e-7)
        throw NumericalError("entropy quadrature did not reach 1e-7 (estimate " + std::to_string(h.error) + ")");

    double mi = h.value - gaussian_entropy(noise_var);
    if (mi < 0.0) {
        if (mi < -1e-7) throw NumericalError("quadrature mutual information below zero: " + std::to_string(mi));
        mi = 0.0;
    }
    return Rate::nats(mi);
}

// ---------------------------------------------------------------------------
// Property checks

double LinearInputReport::worst_margin() const
{
    double w = -1e300;
    for (const auto& r : rows) w = std::max(w, r.mi - r.bound);
    return w;
}

LinearInputReport linear_input_check(const SingleUserParams& prm)
{
    validate(prm);
    const double bstar = beta_star(prm);
    const double bound = c1(prm).nats();
    LinearInputReport rep;
    for (double beta : {0.0, 0.5 * bstar, bstar}) {
        const double var = std::max(0.0, prm.p - beta * beta * prm.ps);
        const UniformDensity uni(var);
        const TriangularDensity tri(var);
        const TwoPointDensity two(var);
        const GaussianDensity gau(var);
        for (const ScalarDensity* d : std::initializer_list<const ScalarDensity*>{&uni, &tri, &two, &gau})
            rep.rows.push_back({d->name(), beta, mi_linear_assignment_quadrature(*d, beta, prm).nats(), bound});
    }
    return rep;
}

GaussianTripleTrial gaussian_triple_trial(const SingleUserParams& prm, const Eigen::Matrix3d& xsu)
{
    validate(prm);
    if (xsu(0, 0) > prm.p * (1.0 + 1e-12) + 1e-300) throw ParameterError("E[X^2] exceeds p");
    if (std::abs(xsu(1, 1) - prm.ps) > 1e-12 * std::max(1.0, prm.ps)) throw ParameterError("Var S must equal ps");

    MatrixXd basis = MatrixXd::Zero(4, 4);
    basis.topLeftCorner<3, 3>() = xsu;
    basis(3, 3) = prm.pz;
    MatrixXd mix(5, 4);
    // basis: X, S, U, Z
    mix << 1, 0, 0, 0,
           0, 1, 0, 0,
           0, 0, 1, 0,
           0, 0, 0, 1,
           1, 1, 0, 1;
    const CovModel cov = CovModel::from_mixing({Var::X, Var::S, Var::U, Var::Z, Var::Y}, mix, basis);

    GaussianTripleTrial t;
    t.beta_star = prm.ps > 0 ? -xsu(0, 1) / prm.ps : 0.0;
    t.mi = gaussian_mi(cov, {Var::U}, {Var::Y}).nats();
    const double residual = 1.0 - t.beta_star;
    t.compensation = 0.5 * std::log1p(std::max(0.0, xsu(0, 0) - t.beta_star * t.beta_star * prm.ps) /
                                      (prm.pz + residual * residual * prm.ps));
    t.bound = c1(prm).nats();
    return t;
}

Eigen::Matrix3d random_triple(const SingleUserParams& prm, const TripleSpec& spec, std::uint64_t seed,
                              std::uint64_t trial)
{
    validate(prm);
    if (!(spec.u_variance_lo > 0.0) || !(spec.u_variance_hi >= spec.u_variance_lo))
        throw ParameterError("triple spec needs 0 < u_variance_lo <= u_variance_hi");
    CounterStream rng(seed, "gaussian_triple", trial);
    // U is drawn independently of S (the auxiliary of a causal code cannot
    // see the state). X = sd_x (a S' + b U' + c W') with (a, b, c) a random
    // unit vector, S', U', W' independent standard normals.
    Eigen::Vector3d dir;
    do {
        dir = Eigen::Vector3d(rng.next_normal(), rng.next_normal(), rng.next_normal());
    } while (dir.norm() < 1e-6);
    dir.normalize();
    const double var_u = rng.log_uniform_in(spec.u_variance_lo, spec.u_variance_hi);
    const double sd_x = std::sqrt(prm.p);
    Eigen::Matrix3d out;
    out(0, 0) = prm.p;
    out(1, 1) = prm.ps;
    out(2, 2) = var_u;
    out(0, 1) = out(1, 0) = sd_x * dir(0) * std::sqrt(prm.ps);
    out(0, 2) = out(2, 0) = sd_x * dir(1) * std::sqrt(var_u);
    out(1, 2) = out(2, 1) = 0.0;
    return out;
}

GaussianTripleReport gaussian_triple_check(const SingleUserParams& prm, const TripleSpec& spec, std::size_t trials,
                                       std::uint64_t seed)
{
    GaussianTripleReport rep;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto trial = gaussian_triple_trial(prm, random_triple(prm, spec, seed, t));
        const double margin = trial.mi - trial.bound;
        rep.worst_margin = std::max(rep.worst_margin, margin);
        if (margin > rep.tolerance) ++rep.violations;
        ++rep.trials;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Monte Carlo

namespace {

double plug_in_mi(const MatrixXd& cov, Index na)
{
    const Index nb = cov.rows() - na;
    try {
        return 0.5 * (log_det(cov.topLeftCorner(na, na)) + log_det(cov.bottomRightCorner(nb, nb)) - log_det(cov));
    } catch (const DegeneracyError&) {
        throw NumericalError("singular sample covariance");
    }
}

} // namespace

McEstimate mc_estimate_mi(const CovModel& cov, const VarSet& a, const VarSet& b, std::size_t n, std::uint64_t seed)
{
    if (n < 1000) throw ParameterError("Monte Carlo needs at least 1000 samples");
    for (Var v : a)
        if (contains(b, v)) throw ParameterError("groups A and B must be disjoint");
    const VarSet aa = effective(cov, a);
    const VarSet bb = effective(cov, b);
    McEstimate est;
    est.samples = n;
    if (aa.empty() || bb.empty()) return est;

    const VarSet vars = join(aa, bb);
    const auto d = static_cast<Index>(vars.size());
    const auto na = static_cast<Index>(aa.size());
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(cov.block(vars));
    const MatrixXd transform = eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

    constexpr std::size_t kGroups = 100;
    std::vector<Eigen::VectorXd> sum(kGroups, Eigen::VectorXd::Zero(d));
    std::vector<MatrixXd> outer(kGroups, MatrixXd::Zero(d, d));
    std::vector<std::size_t> count(kGroups, 0);

    const CounterStream rng(seed, "mc_estimate_mi");
    Eigen::VectorXd z(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (Index j = 0; j < d; ++j) z(j) = rng.normal(i * static_cast<std::uint64_t>(d) + static_cast<std::uint64_t>(j));
        const Eigen::VectorXd x = transform * z;
        const std::size_t g = i * kGroups / n;
        sum[g] += x;
        outer[g].noalias() += x * x.transpose();
        ++count[g];
    }

    Eigen::VectorXd total_sum = Eigen::VectorXd::Zero(d);
    MatrixXd total_outer = MatrixXd::Zero(d, d);
    for (std::size_t g = 0; g < kGroups; ++g) {
        total_sum += sum[g];
        total_outer += outer[g];
    }
    const auto covariance = [](const Eigen::VectorXd& s, const MatrixXd& o, double m) {
        const Eigen::VectorXd mean = s / m;
        return MatrixXd((o - m * mean * mean.transpose()) / (m - 1.0));
    };

    est.nats = plug_in_mi(covariance(total_sum, total_outer, static_cast<double>(n)), na);

    std::vector<double> loo(kGroups);
    double mean_loo = 0.0;
    for (std::size_t g = 0; g < kGroups; ++g) {
        const double m = static_cast<double>(n - count[g]);
        loo[g] = plug_in_mi(covariance(total_sum - sum[g], total_outer - outer[g], m), na);
        mean_loo += loo[g];
    }
    mean_loo /= kGroups;
    double ss = 0.0;
    for (double v : loo) ss += (v - mean_loo) * (v - mean_loo);
    est.stderr_nats = std::sqrt((kGroups - 1.0) / kGroups * ss);
    return est;
}

double McCheck::z() const
{
    const double diff = std::abs(estimate.nats - analytic);
    if (estimate.stderr_nats > 0.0) return diff / estimate.stderr_nats;
    return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

std::vector<McCheck> mc_consistency_check(std::size_t n, std::uint64_t seed)
{
    const SingleUserParams su{100.0, 100.0, 1.0};
    const CovModel dtc = build_cov_dtc(su, beta_star(su));
    const CovModel mac = build_cov_mac_dtc(MacParams{200.0, 100.0, 50.0, 1.0}, MacDtcCoefficients{0.5, 0.3});
    const CovModel jdpt = build_cov_jdpt(MacParams{200.0, 100.0, 100.0, 1.0}, JdptCoefficients{0.9, 0.3});

    struct Case {
        const char* name;
        const CovModel* cov;
        VarSet a, b;
    };
    const Case cases[] = {
        {"single-user I(U;Y)", &dtc, {Var::U}, {Var::Y}},
        {"mac-dtc I(U1,U2;Y)", &mac, {Var::U1, Var::U2}, {Var::Y}},
        {"jdpt I(U1;Y,U2)", &jdpt, {Var::U1}, {Var::Y, Var::U2}},
    };
    std::vector<McCheck> out;
    std::uint64_t k = 0;
    for (const auto& c : cases) {
        McCheck m;
        m.name = c.name;
        m.analytic = gaussian_mi(*c.cov, c.a, c.b).nats();
        m.estimate = mc_estimate_mi(*c.cov, c.a, c.b, n, seed + k++);
        out.push_back(std::move(m));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Suites

namespace {

template <typename Trial>
SuiteResult run_suite(std::string name, double tol, std::size_t trials, Trial&& trial)
{
    SuiteResult res{std::move(name), trials, 0, 0.0, tol, {}, {}};
    for (std::size_t t = 0; t < trials; ++t) {
        try {
            const DiscrepancyReport rep = trial(t);
            for (const auto& item : rep.items) {
                auto it = std::find_if(res.per_bound.begin(), res.per_bound.end(),
                                       [&](const auto& b) { return b.first == item.bound; });
                if (it == res.per_bound.end()) it = res.per_bound.insert(res.per_bound.end(), {item.bound, 0.0});
                it->second = std::max(it->second, item.abs_error);
            }
            const double err = rep.worst();
            res.worst = std::max(res.worst, err);
            if (!(err <= tol)) ++res.failures;
        } catch (const Error& e) {
            ++res.failures;
            if (res.note.empty()) res.note = "trial " + std::to_string(t) + ": " + e.what();
        }
    }
    return res;
}

struct DrawRanges {
    static constexpr double p_lo = 1e-2, p_hi = 1e3;
    static constexpr double ps_lo = 1e-2, ps_hi = 1e3;
    static constexpr double pz_lo = 1e-2, pz_hi = 1e2;
    static constexpr double interior = 0.999;   // keeps Var U strictly positive
};

} // namespace

SuiteResult verify_c1_suite(std::size_t trials, std::uint64_t seed)
{
    using R = DrawRanges;
    return run_suite("single-user-oracle", 1e-9, trials, [seed](std::size_t t) {
        CounterStream rng(seed, "verify_c1", t);
        const SingleUserParams prm{rng.log_uniform_in(R::p_lo, R::p_hi), rng.log_uniform_in(R::ps_lo, R::ps_hi),
                                   rng.log_uniform_in(R::pz_lo, R::pz_hi)};
        const double beta = rng.uniform_in(0.0, R::interior * max_compensation(prm.p, prm.ps));
        return verify_c1(prm, beta);
    });
}

SuiteResult verify_mac_dtc_suite(std::size_t trials, std::uint64_t seed)
{
    using R = DrawRanges;
    return run_suite("mac-dtc-oracle", 1e-9, trials, [seed](std::size_t t) {
        CounterStream rng(seed, "verify_mac_dtc", t);
        const MacParams prm{rng.log_uniform_in(R::p_lo, R::p_hi), rng.log_uniform_in(R::p_lo, R::p_hi),
                            rng.log_uniform_in(R::ps_lo, R::ps_hi), rng.log_uniform_in(R::pz_lo, R::pz_hi)};
        const MacDtcCoefficients c{rng.uniform_in(0.0, R::interior * max_compensation(prm.p1, prm.ps)),
                                   rng.uniform_in(0.0, R::interior * max_compensation(prm.p2, prm.ps))};
        return verify_mac_dtc(prm, c);
    });
}

SuiteResult verify_jdpt_suite(std::size_t trials, std::uint64_t seed)
{
    using R = DrawRanges;
    auto res = run_suite("jdpt-oracle", 1e-9, trials, [seed](std::size_t t) {
        CounterStream rng(seed, "verify_jdpt", t);
        const MacParams prm{rng.log_uniform_in(R::p_lo, R::p_hi), rng.log_uniform_in(R::p_lo, R::p_hi),
                            rng.log_uniform_in(R::ps_lo, R::ps_hi), rng.log_uniform_in(R::pz_lo, R::pz_hi)};
        const double bmax = R::interior * max_compensation(prm.p2, prm.ps);
        const JdptCoefficients c{rng.uniform_in(-2.0, 3.0), rng.uniform_in(-bmax, bmax)};
        return verify_jdpt(prm, c);
    });
    if (res.failures > 0 && res.note.empty())
        res.note = "closed form disagrees with the Gaussian evaluation; oracle values are authoritative";
    return res;
}

} // namespace dtc
