#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qpr/solver_n1.hpp"

namespace qpr::n3 {

// Zero-average response of the averaged linear problem:
// u1_nu = f_nu / (i omega.nu (1 + i eps omega.nu)) for nu != 0.
FourierSeries first_order_response(const Problem& p);

// min |omega . nu| over 0 < |nu|_1 <= (n+1) N, N the forcing degree.
double alpha_min(const Problem& p, std::int64_t budget = kDefaultLatticeBudget);

struct Counterterm {
    double b = 0.0;   // sum_{p >= n} p a_p eps^{p-n} [(zeta + u1)^{p-1}]_0
    double b0 = 0.0;  // leading term n a [(zeta + u1)^{n-1}]_0
};

Counterterm counterterm(const Problem& p, double zeta);

std::complex<double> end_propagator(double eps, double s);  // 1 / (i s (1 + i eps s))
std::complex<double> internal_divisor(double eps, double s, double b, int n);  // i s (1 + i eps s) + b eps^n
std::complex<double> internal_propagator(double eps, double s, double b, int n);

// Everything fixed by an outer choice of zeta plus the resulting expansion.
struct DegenerateState {
    double zeta = 0.0;
    FourierSeries u1;
    double b = 0.0;
    double b0 = 0.0;
    double alpha = 0.0;               // alpha_min of the problem
    std::vector<FourierSeries> xi_orders;  // index i = order k = i + 2
    int K = 0;
    double f2_residual = 0.0;         // |F2(zeta)| after the outer solve
    double fbar_derivative_gap = 0.0; // |dF2bar/dzeta - b0/a| at the root
    std::vector<double> fbar_coeffs;  // F2bar(z) = sum_j fbar_coeffs[j] z^j
    int outer_iterations = 0;

    const FourierSeries& xi(int k) const { return xi_orders.at(static_cast<std::size_t>(k) - 2); }
    FourierSeries xi_sum() const;
};

// Order k >= 2 correction: nonzero modes of the order-(k-1) coefficient of
// the mu-tagged expansion of -eps G(mu eps x1 + xi), divided by the dressed
// divisor. state must hold xi orders 2..k-1.
FourierSeries recursion_step(const Problem& p, const DegenerateState& state, int k);

// Outer scalar solve for zeta (secant on the full average equation, seeded
// by the unique real root of the polynomial leading part) with the xi
// expansion rebuilt at every iterate.
DegenerateState solve(const Problem& p, int K);

// Packs c0 + eps(zeta + u1) + sum xi^[k] into the common solution shape:
// orders[0] = eps (zeta + u1), orders[k-1] = xi^[k] for k >= 2.
SeriesSolution assemble(const Problem& p, const DegenerateState& state);

}  // namespace qpr::n3
