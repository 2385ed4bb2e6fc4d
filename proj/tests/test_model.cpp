#include <doctest.h>

#include <random>
#include <vector>

#include <qpr/errors.hpp>
#include <qpr/model.hpp>

#include "fixtures.hpp"

using qpr::Nonlinearity;
using qpr::Problem;

TEST_CASE("recentering preserves the polynomial") {
    std::vector<double> coeffs = {0.4, -1.2, 0.0, 2.5, -0.7};
    for (double c0 : {0.0, 1.0, -0.3, 2.25}) {
        auto g = Nonlinearity::from_polynomial(coeffs, c0);
        CHECK(g.c0 == c0);
        std::mt19937 rng(42);
        std::uniform_real_distribution<double> dist(-2.0, 2.0);
        for (int i = 0; i < 20; ++i) {
            double x = dist(rng);
            double direct = 0.0;
            for (std::size_t p = coeffs.size(); p-- > 0;) direct = direct * x + coeffs[p];
            CHECK(g.evaluate(x) == doctest::Approx(direct).epsilon(1e-12));
            CHECK(g.evaluate_shifted(x - c0) == doctest::Approx(direct).epsilon(1e-12));
        }
    }
}

TEST_CASE("zero order detection at the working point") {
    auto cubic = Nonlinearity::from_polynomial(std::vector<double>{0.0, 0.0, 0.0, 1.0}, 0.0);
    CHECK(cubic.zero_order == 3);
    CHECK(cubic.lead_coeff == 1.0);
    CHECK(cubic.degree() == 3);

    // Away from the origin the same cubic has a simple zero: (2+y)^3 has a
    // linear term 12y.
    auto shifted = Nonlinearity::from_polynomial(std::vector<double>{0.0, 0.0, 0.0, 1.0}, 2.0);
    CHECK(shifted.zero_order == 1);
    CHECK(shifted.lead_coeff == doctest::Approx(12.0));
    CHECK(shifted.taylor[0] == doctest::Approx(8.0));

    auto e1 = e1_problem();
    CHECK(e1.g.zero_order == 1);
    CHECK(e1.g.lead_coeff == 1.0);
    auto e3 = e3_problem();
    CHECK(e3.g.zero_order == 3);
    CHECK(e3.g.lead_coeff == 1.0);
}

TEST_CASE("taylor tail used by the recursions") {
    auto e1 = e1_problem();
    auto tail1 = qpr::shifted_g_tail(e1.g);
    REQUIRE(tail1.size() == 3);
    CHECK(tail1[0] == 0.0);
    CHECK(tail1[1] == 0.0);  // the linear part lives in the divisor
    CHECK(tail1[2] == 1.0);

    auto e3 = e3_problem();
    auto tail3 = qpr::shifted_g_tail(e3.g);
    REQUIRE(tail3.size() == 4);
    CHECK(tail3[2] == 0.0);
    CHECK(tail3[3] == 1.0);
}

TEST_CASE("validation picks the right scheme") {
    auto r1 = qpr::validate(e1_problem());
    CHECK(r1.ok);
    CHECK(r1.solver == qpr::SolverKind::NonDegenerate);
    CHECK(r1.zero_order == 1);
    CHECK(r1.forcing_degree == 1);

    auto r2 = qpr::validate(e2_problem());
    CHECK(r2.ok);
    CHECK(r2.solver == qpr::SolverKind::NonDegenerate);

    auto r3 = qpr::validate(e3_problem());
    CHECK(r3.ok);
    CHECK(r3.solver == qpr::SolverKind::Degenerate);
    CHECK(r3.zero_order == 3);
}

TEST_CASE("validation rejects broken problems") {
    // Flat nonlinearity: no nonvanishing derivative at the working point.
    auto flat = e1_problem();
    flat.g = Nonlinearity::from_polynomial(std::vector<double>{0.0}, 0.0);
    auto rf = qpr::validate(flat);
    CHECK_FALSE(rf.ok);
    CHECK_THROWS_AS(qpr::require_valid(flat), qpr::ConfigError);

    // Even-order zero: g = x^2.
    auto even = e1_problem();
    even.g = Nonlinearity::from_polynomial(std::vector<double>{0.0, 0.0, 1.0}, 0.0);
    CHECK_FALSE(qpr::validate(even).ok);

    // Average mismatch: g(c0) must match the forcing average.
    auto avg = e1_problem();
    avg.forcing.set_coeff({0}, 0.7);
    CHECK_FALSE(qpr::validate(avg).ok);

    // Non-real forcing.
    auto complex_f = e1_problem();
    complex_f.forcing.set_coeff({1}, qpr::FourierSeries::Coeff(0.5, 0.5));
    CHECK_FALSE(qpr::validate(complex_f).ok);

    // Dimension mismatch between omega and the forcing lattice.
    auto mismatch = e1_problem();
    mismatch.omega.omega = {1.0, 2.0};
    CHECK_FALSE(qpr::validate(mismatch).ok);

    CHECK_NOTHROW(qpr::require_valid(e1_problem()));
}

TEST_CASE("matching a nonzero forcing average") {
    // g(x) = x + x^2 at c0 with g(c0) = f_0: c0 = 0 works only for f_0 = 0,
    // so shift the forcing average to g(1) = 2 and recenter at 1.
    auto p = e1_problem();
    p.forcing.set_coeff({0}, 2.0);
    p.g = Nonlinearity::from_polynomial(std::vector<double>{0.0, 1.0, 1.0}, 1.0);
    auto r = qpr::validate(p);
    CHECK(r.ok);
    CHECK(r.solver == qpr::SolverKind::NonDegenerate);
    CHECK(p.g.lead_coeff == doctest::Approx(3.0));  // g'(1) = 1 + 2
}
