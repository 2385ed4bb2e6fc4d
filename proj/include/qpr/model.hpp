#pragma once

#include <span>
#include <string>
#include <vector>

#include "qpr/fourier.hpp"
#include "qpr/frequency.hpp"

namespace qpr {

// Restoring force g expanded around the working point c0:
// g(c0 + x) = sum_p taylor[p] x^p. zero_order is the index of the first
// derivative that does not vanish at c0 (within 1e-12) and lead_coeff its
// Taylor coefficient; they select between the two solver schemes.
struct Nonlinearity {
    double c0 = 0.0;
    std::vector<double> taylor;
    int zero_order = 0;      // 0 means no nonvanishing derivative was found
    double lead_coeff = 0.0; // taylor[zero_order]

    static Nonlinearity from_taylor(double c0, std::vector<double> taylor);
    // coeffs[p] multiplies x^p in the unshifted variable; re-expanded at c0.
    static Nonlinearity from_polynomial(std::span<const double> coeffs, double c0);

    double evaluate(double x) const;       // g(x), x in the original variable
    double evaluate_shifted(double y) const;  // g(c0 + y)
    int degree() const { return taylor.empty() ? 0 : static_cast<int>(taylor.size()) - 1; }
};

// Forced oscillator data: eps x'' + x' + eps g(x) = eps f(omega t).
struct Problem {
    FrequencyVector omega;
    FourierSeries forcing;  // f, declared real
    Nonlinearity g;
    double epsilon = 0.0;
};

enum class SolverKind { NonDegenerate, Degenerate };

struct ValidationReport {
    bool ok = false;
    SolverKind solver = SolverKind::NonDegenerate;
    int zero_order = 0;
    double lead_coeff = 0.0;
    int forcing_degree = 0;  // max |nu|_1 over the forcing support
    std::vector<std::string> errors;
};

// Checks the solvability hypotheses at the working point: g(c0) matches the
// forcing average, the first nonvanishing derivative exists and has odd
// order, the forcing is real and finitely supported.
ValidationReport validate(const Problem& p);
void require_valid(const Problem& p);  // throws ConfigError with all reasons

// Taylor tail actually fed to the recursions: coefficients of order below
// max(2, zero_order) zeroed (constant and linear parts are handled by the
// propagators, not the expansion).
std::vector<double> shifted_g_tail(const Nonlinearity& g);

}  // namespace qpr
