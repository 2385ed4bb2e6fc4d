#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <qpr/fourier.hpp>

using qpr::FourierSeries;
using qpr::Mode;
using Coeff = FourierSeries::Coeff;

namespace {

FourierSeries random_series(std::mt19937& rng, int dim, int terms, bool real) {
    std::uniform_int_distribution<int> mode_dist(-3, 3);
    std::uniform_real_distribution<double> coeff_dist(-1.0, 1.0);
    FourierSeries s(dim, real);
    for (int i = 0; i < terms; ++i) {
        Mode nu(static_cast<std::size_t>(dim));
        for (auto& c : nu) c = mode_dist(rng);
        Coeff c(coeff_dist(rng), coeff_dist(rng));
        s.add_coeff(nu, c);
        if (real) s.add_coeff(qpr::negated(nu), std::conj(c));
    }
    return s;
}

std::vector<double> random_point(std::mt19937& rng, int dim) {
    std::uniform_real_distribution<double> dist(0.0, 2.0 * std::numbers::pi);
    std::vector<double> psi(static_cast<std::size_t>(dim));
    for (auto& v : psi) v = dist(rng);
    return psi;
}

}  // namespace

TEST_CASE("mode helpers") {
    CHECK(qpr::l1_norm({2, -3, 1}) == 6);
    CHECK(qpr::l1_norm({0}) == 0);
    CHECK(qpr::negated({2, -3}) == Mode{-2, 3});
}

TEST_CASE("coefficient writes prune exact zeros") {
    FourierSeries s(2);
    s.set_coeff({1, 0}, Coeff(0.5, -0.25));
    CHECK(s.term_count() == 1);
    CHECK(s.coeff({1, 0}) == Coeff(0.5, -0.25));
    CHECK(s.coeff({0, 1}) == Coeff(0.0, 0.0));  // absent modes read as zero

    s.set_coeff({1, 0}, Coeff(0.0, 0.0));
    CHECK(s.empty());

    s.add_coeff({2, 1}, Coeff(1.0, 0.0));
    s.add_coeff({2, 1}, Coeff(-1.0, 0.0));  // exact cancellation prunes too
    CHECK(s.empty());

    CHECK_THROWS_AS(s.set_coeff({1}, Coeff(1.0, 0.0)), std::invalid_argument);
}

TEST_CASE("norms and average") {
    FourierSeries s(1);
    s.set_coeff({0}, Coeff(2.0, 0.0));
    s.set_coeff({3}, Coeff(0.0, -4.0));
    s.set_coeff({-1}, Coeff(1.0, 0.0));
    CHECK(s.average() == Coeff(2.0, 0.0));
    CHECK(s.max_mode_norm() == 3);
    CHECK(s.sup_coeff_norm() == doctest::Approx(4.0));
    CHECK(s.l1_coeff_norm() == doctest::Approx(7.0));
    CHECK(qpr::without_average(s).average() == Coeff(0.0, 0.0));
    CHECK(qpr::without_average(s).term_count() == 2);
}

TEST_CASE("convolution matches the hand product") {
    FourierSeries a(1), b(1);
    a.set_coeff({1}, 1.0);
    a.set_coeff({-1}, 2.0);
    b.set_coeff({0}, 3.0);
    b.set_coeff({1}, 1.0);
    FourierSeries c = qpr::convolve(a, b);
    CHECK(c.coeff({2}) == Coeff(1.0, 0.0));
    CHECK(c.coeff({1}) == Coeff(3.0, 0.0));
    CHECK(c.coeff({0}) == Coeff(2.0, 0.0));
    CHECK(c.coeff({-1}) == Coeff(6.0, 0.0));
    CHECK(c.term_count() == 4);
}

TEST_CASE("convolution agrees with pointwise products on random samples") {
    std::mt19937 rng(12345);
    FourierSeries a = random_series(rng, 2, 10, false);
    FourierSeries b = random_series(rng, 2, 10, false);
    FourierSeries c = qpr::convolve(a, b);
    double scale = a.l1_coeff_norm() * b.l1_coeff_norm() + 1.0;
    for (int i = 0; i < 100; ++i) {
        auto psi = random_point(rng, 2);
        Coeff lhs = c.evaluate(psi);
        Coeff rhs = a.evaluate(psi) * b.evaluate(psi);
        CHECK(std::abs(lhs - rhs) <= 1e-11 * scale);
    }
}

TEST_CASE("real series stay real under products and derivatives") {
    std::mt19937 rng(999);
    FourierSeries a = random_series(rng, 2, 8, true);
    FourierSeries b = random_series(rng, 2, 8, true);
    REQUIRE(a.is_conjugate_symmetric());
    FourierSeries c = qpr::convolve(a, b);
    CHECK(c.conjugacy_defect() <= 1e-14 * (c.sup_coeff_norm() + 1.0));
    std::vector<double> omega = {1.0, std::numbers::sqrt2};
    FourierSeries d1 = qpr::directional_derivative(c, omega, 1);
    FourierSeries d2 = qpr::directional_derivative(c, omega, 2);
    CHECK(d1.is_conjugate_symmetric(1e-12));
    CHECK(d2.is_conjugate_symmetric(1e-12));
    auto psi = random_point(rng, 2);
    CHECK(std::abs(c.evaluate(psi).imag()) <= 1e-12 * (c.l1_coeff_norm() + 1.0));
}

TEST_CASE("directional derivative multiplies each mode by i omega.nu") {
    FourierSeries s(2);
    s.set_coeff({2, -1}, Coeff(1.0, 1.0));
    std::vector<double> omega = {0.5, 2.0};
    double sdot = 2 * 0.5 + (-1) * 2.0;  // = -1
    FourierSeries d1 = qpr::directional_derivative(s, omega, 1);
    CHECK(d1.coeff({2, -1}) == Coeff(1.0, 1.0) * Coeff(0.0, sdot));
    FourierSeries d2 = qpr::directional_derivative(s, omega, 2);
    CHECK(d2.coeff({2, -1}) == Coeff(1.0, 1.0) * Coeff(-sdot * sdot, 0.0));
    CHECK_THROWS_AS(qpr::directional_derivative(s, omega, 3), std::invalid_argument);
}

TEST_CASE("polynomial composition via Horner") {
    FourierSeries u(1, true);  // cos psi
    u.set_coeff({1}, 0.5);
    u.set_coeff({-1}, 0.5);

    // u^2 = 1/2 + (e^{2i psi} + e^{-2i psi})/4
    std::vector<double> sq = {0.0, 0.0, 1.0};
    FourierSeries u2 = qpr::compose_polynomial(sq, u);
    CHECK(u2.coeff({0}) == Coeff(0.5, 0.0));
    CHECK(u2.coeff({2}) == Coeff(0.25, 0.0));
    CHECK(u2.coeff({-2}) == Coeff(0.25, 0.0));
    CHECK(u2.term_count() == 3);

    std::mt19937 rng(777);
    std::vector<double> poly = {0.3, -1.0, 0.25, 2.0};
    FourierSeries w = random_series(rng, 1, 6, true);
    FourierSeries composed = qpr::compose_polynomial(poly, w);
    for (int i = 0; i < 50; ++i) {
        auto psi = random_point(rng, 1);
        double x = w.evaluate(psi).real();
        double expect = poly[0] + poly[1] * x + poly[2] * x * x + poly[3] * x * x * x;
        CHECK(composed.evaluate(psi).real() == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("series arithmetic") {
    FourierSeries a(1), b(1);
    a.set_coeff({1}, 2.0);
    b.set_coeff({1}, -2.0);
    b.set_coeff({2}, 1.0);
    FourierSeries sum = a + b;
    CHECK(sum.term_count() == 1);  // the {1} entries cancel exactly
    CHECK(sum.coeff({2}) == Coeff(1.0, 0.0));
    FourierSeries scaled = Coeff(0.0, 2.0) * a;
    CHECK(scaled.coeff({1}) == Coeff(0.0, 4.0));
    FourierSeries diff = a - a;
    CHECK(diff.empty());
    CHECK_THROWS_AS(a += FourierSeries(2), std::invalid_argument);
}
