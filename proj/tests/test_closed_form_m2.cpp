#include <doctest.h>

#include <cmath>

#include "psalloc/closed_form_m2.hpp"
#include "psalloc/ctmc.hpp"

using namespace psalloc;

TEST_CASE("a* is rho/(1+rho)^2 and stays below 1/4") {
    CHECK(m2::a_star(0.5) == doctest::Approx(0.5 / 2.25).epsilon(1e-15));
    for (double rho : {0.01, 0.3, 0.6, 0.99}) {
        CHECK(m2::a_star(rho) > 0.0);
        CHECK(m2::a_star(rho) < 0.25);
    }
}

TEST_CASE("double-integral forms match the ctmc oracle") {
    for (double rho : {0.3, 0.5, 0.8}) {
        SolverConfig cfg;
        cfg.R = default_truncation({2, rho}) + 40;
        JointDistribution c = solve_stationary({2, rho}, cfg);
        for (int r = 1; r <= 25; r += 4) {
            const double p0 = m2::pi0(rho, r);
            if (c.pi(0, r) > 1e-12)
                CHECK(std::abs(p0 - c.pi(0, r)) / c.pi(0, r) <= 1e-8);
            const double p1 = m2::pi1(rho, r);
            if (c.pi(1, r) > 1e-12)
                CHECK(std::abs(p1 - c.pi(1, r)) / c.pi(1, r) <= 1e-8);
        }
        // r = 0 entries via the corner route
        CHECK(m2::pi0(rho, 0) == doctest::Approx(1.0 - rho));
        CHECK(m2::pi1(rho, 0) == doctest::Approx(c.pi(1, 0)).epsilon(1e-8));
        CHECK(m2::pi2(rho, 0) == doctest::Approx(c.pi(2, 0)).epsilon(1e-8));
    }
}

TEST_CASE("corner identities") {
    const double rho = 0.5;
    CHECK(m2::pi1(rho, 0) + m2::pi0(rho, 1) == doctest::Approx(rho * (1 - rho)).epsilon(1e-10));
    // pi(2,r) >= 0 through the identity route
    for (int r = 0; r <= 10; ++r) CHECK(m2::pi2(rho, r) >= 0.0);
}

TEST_CASE("series cross-check at small r") {
    for (double rho : {0.3, 0.5, 0.8})
        for (int r = 1; r <= 8; ++r)
            CHECK(m2::pi0_series(rho, r) == doctest::Approx(m2::pi0(rho, r)).epsilon(1e-6));
    CHECK_THROWS_AS(m2::pi0_series(0.5, 9), ValidationError);
}

TEST_CASE("tail constants {2, 2, 1} (1-rho) rho^(r+2) r^(k-2)") {
    const double rho = 0.5;
    const int r = 300;
    const double base = (1.0 - rho) * std::pow(rho, r + 2);
    CHECK(m2::pi0(rho, r) / (2.0 / (double(r) * r) * base) == doctest::Approx(1.0).epsilon(0.10));
    CHECK(m2::pi1(rho, r) / (2.0 / r * base) == doctest::Approx(1.0).epsilon(0.10));
    // pi(2,r): the identity route at large r needs the next entries
    const double p2 = (1.0 - rho) * std::pow(rho, r + 2) - m2::pi1(rho, r + 1) -
                      m2::pi0(rho, r + 2);
    CHECK(p2 / base == doctest::Approx(1.0).epsilon(0.10));
}

TEST_CASE("full distribution: residuals, geometric identity, ctmc agreement") {
    const double rho = 0.5;
    JointDistribution d = m2::full_distribution(rho, 25);
    CHECK(d.pi(0, 0) == doctest::Approx(1.0 - rho));
    CHECK(normalization_residual(d) <= 1e-8);
    for (int N = 0; N <= 20; ++N) CHECK(geometric_identity_residual(d, N) <= 1e-9);
    CHECK(min_entry(d) >= -1e-12);
}

TEST_CASE("serial and parallel sweeps are bit-identical") {
    JointDistribution a = m2::full_distribution(0.4, 12, {}, 1);
    JointDistribution b = m2::full_distribution(0.4, 12, {}, 0);
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
}
