#pragma once

#include <complex>
#include <span>
#include <vector>

#include "qpr/model.hpp"

namespace qpr {

// Truncated power-series solution: orders[i] holds the order-(i+1) term of
// the response expansion, so the quasi-periodic response is
// x(t) = c0 + sum_k order(k) evaluated at psi = omega t.
struct SeriesSolution {
    double epsilon = 0.0;
    double c0 = 0.0;
    int K = 0;
    std::vector<FourierSeries> orders;  // orders[k-1] = order k
    double mu_radius_estimate = 0.0;    // root-test radius of the order sums
    bool radius_warning = false;        // estimate <= 1: truncation untrusted

    const FourierSeries& order(int k) const { return orders.at(static_cast<std::size_t>(k) - 1); }
    FourierSeries total() const;
};

namespace n1 {

// Linearized divisor -eps s^2 + i s + eps a at line frequency s = omega . nu.
std::complex<double> propagator(double eps, double s, double a);

// Order 1: coefficient-wise eps f_nu / divisor over the forcing support.
FourierSeries first_order(const Problem& p);

// Order k >= 2 from all lower orders: convolution powers of the Taylor tail,
// summed over ordered splittings of k-1, divided by the divisor (nonzero
// modes) or by the slope a (zero mode).
FourierSeries recursion_step(const Problem& p, std::span<const FourierSeries> lower, int k);

SeriesSolution solve(const Problem& p, int K);

// Empirical bound |u^(k)_nu| <= A * C^k * e^{-xi_prime |nu|_1} * eps^{(k+1)/2}.
struct DecayEnvelope {
    double A = 0.0;
    double C = 0.0;
    double xi_prime = 0.0;
    double worst_slack = 0.0;  // max |coeff| / envelope over all data points
    bool scaling_ok = false;
};

// Fits (A, C, xi_prime) dominating every stored coefficient, then re-solves
// at eps/2 and checks the per-mode ratio
// |u^(k)_nu(eps/2)| / |u^(k)_nu(eps)| <= 2^{-(k+1)/2} * 1.2.
// Throws VerificationError if the ratio check fails.
DecayEnvelope check_envelope(const Problem& p, const SeriesSolution& s);

}  // namespace n1
}  // namespace qpr
