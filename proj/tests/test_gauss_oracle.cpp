#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "dtc/gauss_oracle.hpp"
#include "dtc/quadrature.hpp"

using namespace dtc;
using doctest::Approx;

namespace {

CovModel pair_model(double rho)
{
    Eigen::Matrix2d m;
    m << 1.0, rho, rho, 1.0;
    return CovModel({Var::X, Var::S}, m);
}

} // namespace

TEST_CASE("quadrature")
{
    const auto r = integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
    CHECK(r.value == Approx(2.0).epsilon(1e-13));
    CHECK(r.converged);
    const double kinks[] = {0.0};
    const auto a = integrate_pieces([](double x) { return std::abs(x); }, -1.0, 2.0, kinks);
    CHECK(a.value == Approx(2.5).epsilon(1e-14));
    CHECK(integrate([](double) { return 1.0; }, 1.0, 1.0).value == 0.0);
}

TEST_CASE("covariance model validation")
{
    Eigen::Matrix2d asym;
    asym << 1.0, 0.5, 0.2, 1.0;
    CHECK_THROWS_AS(CovModel({Var::X, Var::S}, asym), ParameterError);
    Eigen::Matrix2d neg;
    neg << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(CovModel({Var::X, Var::S}, neg), ParameterError);
    CHECK_THROWS_AS(CovModel({Var::X, Var::X}, Eigen::Matrix2d::Identity()), ParameterError);
    CHECK_THROWS_AS(CovModel({Var::X}, Eigen::Matrix2d::Identity()), ParameterError);
    // a round-off negative eigenvalue is accepted
    Eigen::Matrix2d edge;
    edge << 1.0, 1.0 + 1e-13, 1.0 + 1e-13, 1.0;
    CHECK_NOTHROW(CovModel({Var::X, Var::S}, edge));
}

TEST_CASE("mutual information of a Gaussian pair")
{
    CHECK(gaussian_mi(pair_model(0.0), {Var::X}, {Var::S}).nats() == Approx(0.0).epsilon(1e-15));
    CHECK(gaussian_mi(pair_model(0.5), {Var::X}, {Var::S}).nats() == Approx(0.14384103622589046).epsilon(1e-14));
    CHECK_THROWS_AS(gaussian_mi(pair_model(1.0), {Var::X}, {Var::S}), DegeneracyError);
    CHECK_THROWS_AS(gaussian_mi(pair_model(0.5), {Var::X}, {Var::X}), ParameterError);
    CHECK_THROWS_AS(gaussian_mi(pair_model(0.5), {Var::X}, {Var::Y}), ParameterError);
}

TEST_CASE("conditional mutual information")
{
    const SingleUserParams prm{100, 100, 1};
    const CovModel cov = build_cov_dtc(prm, beta_star(prm));
    // Z enters Y, so conditioning on it is not neutral
    CHECK(gaussian_cond_mi(cov, {Var::U}, {Var::Y}, {Var::Z}).nats() !=
          Approx(gaussian_mi(cov, {Var::U}, {Var::Y}).nats()));
    const CovModel mac = build_cov_mac_dtc(MacParams{200, 100, 50, 1}, {0.5, 0.3});
    const CovModel indep = CovModel::from_mixing({Var::U1, Var::U2, Var::Y},
                                                 (Eigen::Matrix3d() << 1, 0, 0, 0, 1, 0, 1, 0, 1).finished(),
                                                 Eigen::Matrix3d::Identity());
    CHECK(gaussian_cond_mi(indep, {Var::U1}, {Var::Y}, {Var::U2}).nats() ==
          Approx(gaussian_mi(indep, {Var::U1}, {Var::Y}).nats()).epsilon(1e-14));
    // B inside C
    CHECK(gaussian_cond_mi(mac, {Var::U1}, {Var::Y}, {Var::Y, Var::U2}).nats() == Approx(0.0).epsilon(1e-15));
    // chain rule
    const double joint = gaussian_mi(mac, {Var::U1, Var::U2}, {Var::Y}).nats();
    const double chain =
        gaussian_mi(mac, {Var::U2}, {Var::Y}).nats() + gaussian_cond_mi(mac, {Var::U1}, {Var::Y}, {Var::U2}).nats();
    CHECK(joint == Approx(chain).epsilon(1e-13));
}

TEST_CASE("constructions")
{
    const SingleUserParams prm{100, 100, 1};
    const CovModel c0 = build_cov_dtc(prm, 0.0);
    CHECK(c0.cov(Var::U, Var::S) == 0.0);
    CHECK(c0.cov(Var::X, Var::S) == 0.0);
    CHECK(c0.output_consistent());
    const CovModel edge = build_cov_dtc(prm, 1.0);
    CHECK(edge.cov(Var::U, Var::U) == 0.0);
    CHECK(gaussian_mi(edge, {Var::U}, {Var::Y}).nats() == 0.0);
    const CovModel b = build_cov_dtc(prm, 0.4);
    CHECK(b.cov(Var::X, Var::X) == Approx(100.0));
    CHECK(b.cov(Var::X, Var::S) == Approx(-40.0));

    const CovModel j0 = build_cov_jdpt(MacParams{200, 100, 50, 1}, {0.0, 0.0});
    CHECK(j0.cov(Var::U1, Var::S) == 0.0);
    CHECK(j0.cov(Var::U2, Var::S) == 0.0);
    CHECK(j0.output_consistent());
    const CovModel j = build_cov_jdpt(MacParams{200, 100, 25, 1}, {0.5, 2.0});
    CHECK(j.cov(Var::U2, Var::U2) == 0.0);
    CHECK(j.cov(Var::X1, Var::S) == 0.0);
    CHECK(j.cov(Var::U1, Var::S) == Approx(12.5));
}

TEST_CASE("closed forms agree with the covariance oracle")
{
    const SingleUserParams prm{100, 100, 1};
    CHECK(verify_c1(prm, beta_star(prm)).pass());
    CHECK(verify_c1(prm, 0.0).pass());
    CHECK(verify_c1(SingleUserParams{100, 0, 1}, 0.0).pass());
    const MacParams mac{200, 100, 100, 1};
    const auto r = verify_mac_dtc(mac, {0, 0});
    CHECK(r.items.size() == 3);
    CHECK(r.pass());
    const auto jd = verify_jdpt(mac, {0.9, 0.3});
    CHECK(jd.items.size() == 3);
    CHECK(jd.worst() <= 1e-9);
    CHECK(verify_mac_dtc(MacParams{200, 100, 0, 1}, {0, 0}).pass());
    CHECK(verify_jdpt(MacParams{200, 100, 0, 1}, {0, 0}).pass());
}

TEST_CASE("seeded oracle suites")
{
    for (const auto& res : {verify_c1_suite(100, 3), verify_mac_dtc_suite(100, 3), verify_jdpt_suite(100, 3)}) {
        CAPTURE(res.name);
        CHECK(res.trials == 100);
        CHECK(res.pass());
        CHECK(res.worst <= 1e-9);
        CHECK(!res.per_bound.empty());
    }
    const auto a = verify_jdpt_suite(50, 9);
    const auto b = verify_jdpt_suite(50, 9);
    CHECK(a.worst == b.worst);
}

TEST_CASE("densities")
{
    const GaussianDensity g(4.0);
    const UniformDensity u(4.0);
    const TriangularDensity t(4.0);
    const TwoPointDensity d(4.0);
    for (const ScalarDensity* s : {static_cast<const ScalarDensity*>(&g), static_cast<const ScalarDensity*>(&u),
                                   static_cast<const ScalarDensity*>(&t), static_cast<const ScalarDensity*>(&d)}) {
        CAPTURE(s->name());
        CHECK(s->variance() == Approx(4.0).epsilon(1e-14));
        CHECK(s->mass() == Approx(1.0).epsilon(1e-9));
    }
    CHECK(d.smoothed_pdf(2.0, 1.0) == Approx(0.5 * (1.0 / std::sqrt(2 * std::numbers::pi)) *
                                             (1.0 + std::exp(-8.0))).epsilon(1e-14));
}

TEST_CASE("linear assignment quadrature")
{
    const SingleUserParams prm{100, 100, 1};
    const double bs = beta_star(prm);
    const double full = prm.p - bs * bs * prm.ps;
    CHECK(mi_linear_assignment_quadrature(GaussianDensity(full), bs, prm).nats() ==
          Approx(c1(prm).nats()).epsilon(1e-7));
    CHECK(mi_linear_assignment_quadrature(GaussianDensity(40.0), 0.3, prm).nats() ==
          Approx(c1_inner(SingleUserParams{40.0 + 9.0, 100, 1}, 0.3).nats()).epsilon(1e-7));
    CHECK(mi_linear_assignment_quadrature(UniformDensity(full), bs, prm).nats() < c1(prm).nats() - 1e-6);
    CHECK_THROWS_AS(mi_linear_assignment_quadrature(UniformDensity(full * 1.1), bs, prm), ParameterError);
}

TEST_CASE("linear input check")
{
    const auto rep = linear_input_check(SingleUserParams{100, 100, 1});
    CHECK(rep.rows.size() == 12);
    CHECK(rep.pass());
    const double bs = beta_star(SingleUserParams{100, 100, 1});
    for (const auto& r : rep.rows) {
        CAPTURE(r.density);
        CAPTURE(r.beta);
        const bool tight = std::abs(r.mi - r.bound) <= rep.tolerance;
        CHECK(tight == (r.density == "gaussian" && r.beta == bs));
    }
}

TEST_CASE("Gaussian triples")
{
    const SingleUserParams prm{100, 100, 1};
    // U proportional to X, X independent of S
    Eigen::Matrix3d ux;
    ux << 100, 0, 10, 0, 100, 0, 10, 0, 1;
    const auto t0 = gaussian_triple_trial(prm, ux);
    CHECK(t0.beta_star == 0.0);
    CHECK(t0.mi == Approx(c1_inner(prm, 0.0).nats()).epsilon(1e-12));

    // the compensation construction at beta* is tight
    const double bs = beta_star(prm);
    const double vu = prm.p - bs * bs * prm.ps;
    Eigen::Matrix3d tight;
    tight << prm.p, -bs * prm.ps, vu, -bs * prm.ps, prm.ps, 0, vu, 0, vu;
    const auto t1 = gaussian_triple_trial(prm, tight);
    CHECK(t1.beta_star == Approx(bs).epsilon(1e-14));
    CHECK(t1.mi == Approx(c1(prm).nats()).epsilon(1e-12));

    for (std::uint64_t k = 0; k < 20; ++k) {
        const Eigen::Matrix3d m = random_triple(prm, TripleSpec{}, 5, k);
        CHECK(m(0, 0) == prm.p);
        CHECK(m(1, 1) == prm.ps);
        CHECK(m(1, 2) == 0.0);
        CHECK(Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(m).eigenvalues().minCoeff() >= -1e-9);
    }
    const auto rep = gaussian_triple_check(prm, TripleSpec{}, 2000, 5);
    CHECK(rep.trials == 2000);
    CHECK(rep.violations == 0);
    CHECK(rep.worst_margin <= 1e-9);
}

TEST_CASE("Monte Carlo estimates")
{
    const auto indep = mc_estimate_mi(pair_model(0.0), {Var::X}, {Var::S}, 100000, 1);
    CHECK(std::abs(indep.nats) <= 3.0 * indep.stderr_nats);
    const SingleUserParams prm{100, 100, 1};
    const CovModel cov = build_cov_dtc(prm, beta_star(prm));
    const auto a = mc_estimate_mi(cov, {Var::U}, {Var::Y}, 200000, 42);
    const auto b = mc_estimate_mi(cov, {Var::U}, {Var::Y}, 200000, 42);
    CHECK(std::memcmp(&a.nats, &b.nats, sizeof(double)) == 0);
    CHECK(std::memcmp(&a.stderr_nats, &b.stderr_nats, sizeof(double)) == 0);
    CHECK(std::abs(a.nats - c1(prm).nats()) <= 3.0 * a.stderr_nats);
    CHECK(mc_estimate_mi(cov, {Var::U}, {Var::Y}, 200000, 43).nats != a.nats);
    CHECK_THROWS_AS(mc_estimate_mi(cov, {Var::U}, {Var::Y}, 999, 1), ParameterError);
}

TEST_CASE("Monte Carlo standard errors are calibrated")
{
    // signed z over 50 seeds x 3 constructions should look standard normal
    double sum = 0.0, sum2 = 0.0;
    int beyond3 = 0, n = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed)
        for (const auto& m : mc_consistency_check(20000, 500 + seed)) {
            const double z = (m.estimate.nats - m.analytic) / m.estimate.stderr_nats;
            sum += z;
            sum2 += z * z;
            beyond3 += std::abs(z) > 3.0;
            ++n;
        }
    const double mean = sum / n;
    const double sd = std::sqrt(sum2 / n - mean * mean);
    CHECK(std::abs(mean) <= 0.3);
    CHECK(sd >= 0.8);
    CHECK(sd <= 1.25);
    CHECK(beyond3 <= 3);
}
