#pragma once

#include <qpr/model.hpp>

// The three reference problems used throughout the tests:
//   e1: d=1, f = cos psi, g(x) = x + x^2        (simple zero at 0)
//   e2: d=2, omega = (1, golden ratio), f = cos psi1 + cos psi2, g = x + x^3
//   e3: d=1, f = cos psi, g(x) = x^3            (zero of order 3)
inline qpr::Problem e1_problem(double eps = 0.05) {
    qpr::Problem p;
    p.omega.omega = {1.0};
    p.forcing = qpr::FourierSeries(1, true);
    p.forcing.set_coeff({1}, 0.5);
    p.forcing.set_coeff({-1}, 0.5);
    p.g = qpr::Nonlinearity::from_polynomial(std::vector<double>{0.0, 1.0, 1.0}, 0.0);
    p.epsilon = eps;
    return p;
}

inline qpr::Problem e2_problem(double eps = 0.05) {
    qpr::Problem p;
    p.omega.omega = {1.0, 1.6180339887498949};
    p.forcing = qpr::FourierSeries(2, true);
    p.forcing.set_coeff({1, 0}, 0.5);
    p.forcing.set_coeff({-1, 0}, 0.5);
    p.forcing.set_coeff({0, 1}, 0.5);
    p.forcing.set_coeff({0, -1}, 0.5);
    p.g = qpr::Nonlinearity::from_polynomial(std::vector<double>{0.0, 1.0, 0.0, 1.0}, 0.0);
    p.epsilon = eps;
    return p;
}

inline qpr::Problem e3_problem(double eps = 0.05) {
    qpr::Problem p;
    p.omega.omega = {1.0};
    p.forcing = qpr::FourierSeries(1, true);
    p.forcing.set_coeff({1}, 0.5);
    p.forcing.set_coeff({-1}, 0.5);
    p.g = qpr::Nonlinearity::from_polynomial(std::vector<double>{0.0, 0.0, 0.0, 1.0}, 0.0);
    p.epsilon = eps;
    return p;
}
