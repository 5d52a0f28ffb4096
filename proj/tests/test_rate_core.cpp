#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dtc/counter_rng.hpp"
#include "dtc/rate_core.hpp"
#include "support/golden_section.hpp"

using namespace dtc;
using doctest::Approx;

namespace {

SingleUserParams su(double p, double ps, double pz) { return SingleUserParams{p, ps, pz}; }

} // namespace

TEST_CASE("rate unit conversion")
{
    const Rate r = Rate::bits(1.0);
    CHECK(r.nats() == Approx(std::numbers::ln2).epsilon(1e-15));
    CHECK(r.in(Unit::Bits) == Approx(1.0).epsilon(1e-15));
    CHECK(parse_unit("nats") == Unit::Nats);
    CHECK_THROWS_AS(parse_unit("dB"), ParameterError);
    CHECK(Rate::nats(-1e-16).nats() == 0.0);
    CHECK_THROWS_AS(Rate::nats(-1e-6), NumericalError);
    CHECK_THROWS_AS(Rate::nats(std::nan("")), NumericalError);
}

TEST_CASE("parameter validation")
{
    CHECK_THROWS_AS(c1(su(-1, 1, 1)), ParameterError);
    CHECK_THROWS_AS(c1(su(1, -1, 1)), ParameterError);
    CHECK_THROWS_AS(c1(su(1, 1, 0)), ParameterError);
    CHECK_THROWS_AS(c1(su(INFINITY, 1, 1)), ParameterError);
    CHECK_THROWS_AS(c1_inner(su(1, 1, 1), 1.5), ParameterError);
    CHECK_THROWS_AS(c1_inner(su(1, 1, 1), -0.1), ParameterError);
    CHECK_NOTHROW(c1_inner(su(1, 1, 1), 1.0));
}

TEST_CASE("c1_inner values")
{
    CHECK(c1_inner(su(0, 100, 1), 0.0).nats() == 0.0);
    CHECK(c1_inner(su(100, 100, 1), 0.0).bits() == Approx(0.4964201042135669).epsilon(1e-13));
    CHECK(c1_inner(su(200, 100, 1), 1.0).bits() == Approx(3.329105741375897).epsilon(1e-13));
    // beta at the domain edge spends all power on cancellation
    CHECK(c1_inner(su(100, 100, 1), 1.0).nats() == 0.0);
}

TEST_CASE("beta_star closed form")
{
    CHECK(beta_star(su(100, 0, 1)) == 0.0);
    CHECK(beta_star(su(0, 100, 1)) == 0.0);
    CHECK(beta_star(su(100, 100, 1)) == Approx(0.9048750780274961).epsilon(1e-14));
    CHECK(beta_star(su(100, 100, 1)) == Approx((201.0 - std::sqrt(401.0)) / 200.0).epsilon(1e-14));
    CHECK(beta_star(su(4, 1, 1)) == Approx(0.7639320225002103).epsilon(1e-14));
    // tiny pz, huge ps: the stable form must stay inside the domain
    const auto edge = su(1e-3, 1e3, 1e-2);
    CHECK(beta_star(edge) <= max_compensation(edge.p, edge.ps));
}

TEST_CASE("beta_star matches a long double golden-section search")
{
    for (std::uint64_t t = 0; t < 200; ++t) {
        CounterStream rng(7, "beta-star-unit", t);
        const auto prm = su(rng.log_uniform_in(1e-2, 1e3), rng.log_uniform_in(1e-2, 1e3), rng.log_uniform_in(1e-2, 1e2));
        const long double hi = std::sqrt(static_cast<long double>(prm.p) / prm.ps);
        const long double arg = test::golden_section_max(
            [&](long double b) { return test::compensated_rate(prm.p, prm.ps, prm.pz, b); }, 0.0L, hi);
        CAPTURE(prm.p);
        CAPTURE(prm.ps);
        CAPTURE(prm.pz);
        CHECK(std::abs(beta_star(prm) - static_cast<double>(arg)) <= 1e-7);
        const long double best = test::compensated_rate(prm.p, prm.ps, prm.pz, arg);
        CHECK(std::abs(c1(prm).nats() - static_cast<double>(best)) <= 1e-12);
    }
}

TEST_CASE("c1 values and ordering")
{
    CHECK(c1(su(0, 100, 1)).nats() == 0.0);
    CHECK(c1(su(100, 100, 1)).bits() == Approx(1.697016412274029).epsilon(1e-13));
    CHECK(c1(su(100, 0, 1)).bits() == Approx(3.329105741375897).epsilon(1e-13));
    CHECK(c1(su(1, 100, 1)).bits() == Approx(0.007176932425521201).epsilon(1e-12));
    for (double p : {0.01, 0.3, 1.0, 7.0, 100.0, 1e4}) {
        const auto prm = su(p, 100, 1);
        CHECK(c1(prm) <= trivial_upper(prm));
        for (int k = 0; k <= 20; ++k) {
            const double b = max_compensation(p, 100.0) * k / 20.0;
            CHECK(c1_inner(prm, b).nats() <= c1(prm).nats() + 1e-15);
        }
    }
}

TEST_CASE("trivial upper bound and high-SNR closure")
{
    CHECK(trivial_upper(su(0, 100, 1)).nats() == 0.0);
    CHECK(trivial_upper(su(1, 100, 1)).bits() == Approx(0.5).epsilon(1e-15));
    CHECK(trivial_upper(su(100, 100, 1)).bits() == Approx(3.329105741375897).epsilon(1e-13));
    const auto hi = su(1e4, 100, 1);
    const double gap = trivial_upper(hi).bits() - c1(hi).bits();
    CHECK(gap == Approx(0.007248320442914561).epsilon(1e-9));
    CHECK(gap <= 0.01);
}

TEST_CASE("lattice rate c3")
{
    CHECK(lattice_shaping_loss<double>() / std::numbers::ln2 == Approx(0.2546143348200630).epsilon(1e-14));
    CHECK(c3(su(0, 0, 1)).nats() == 0.0);
    CHECK(c3(su(100, 0, 1)).bits() == Approx(3.074491406555834).epsilon(1e-13));
    const double thr = 2.0 * std::numbers::pi * std::numbers::e / 12.0 - 1.0;
    CHECK(thr == Approx(0.42328903711226118).epsilon(1e-14));
    CHECK(c3(su(thr * (1 - 1e-9), 0, 1)).nats() == 0.0);
    CHECK(c3(su(thr * (1 + 1e-9), 0, 1)).nats() > 0.0);
    // c3 ignores ps
    CHECK(c3(su(5, 0, 1)).nats() == c3(su(5, 1000, 1)).nats());
}

TEST_CASE("costa alpha")
{
    CHECK(costa_alpha(su(0, 1, 1)) == 0.0);
    CHECK(costa_alpha(su(100, 1, 1)) == Approx(100.0 / 101.0).epsilon(1e-15));
    CHECK(costa_alpha(su(3, 1, 3)) == 0.5);
}

TEST_CASE("long double instantiation agrees")
{
    const BasicSingleUserParams<long double> prm{100.0L, 100.0L, 1.0L};
    CHECK(static_cast<double>(c1(prm).bits()) == Approx(1.697016412274029).epsilon(1e-15));
    CHECK(static_cast<double>(beta_star(prm)) == Approx(0.9048750780274961).epsilon(1e-15));
}
