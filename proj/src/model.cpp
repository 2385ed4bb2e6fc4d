#include "qpr/model.hpp"

#include <cmath>
#include <sstream>

#include "qpr/errors.hpp"

namespace qpr {

namespace {
constexpr double kCoeffZeroTol = 1e-12;
}

Nonlinearity Nonlinearity::from_taylor(double c0, std::vector<double> taylor) {
    Nonlinearity g;
    g.c0 = c0;
    g.taylor = std::move(taylor);
    for (std::size_t p = 1; p < g.taylor.size(); ++p) {
        if (std::abs(g.taylor[p]) > kCoeffZeroTol) {
            g.zero_order = static_cast<int>(p);
            g.lead_coeff = g.taylor[p];
            break;
        }
    }
    return g;
}

Nonlinearity Nonlinearity::from_polynomial(std::span<const double> coeffs, double c0) {
    // Re-expand sum_p coeffs[p] x^p around x = c0 + y binomially:
    // the y^q coefficient is sum_{p>=q} coeffs[p] C(p,q) c0^{p-q}.
    std::vector<double> shifted(coeffs.size(), 0.0);
    for (std::size_t p = 0; p < coeffs.size(); ++p) {
        if (coeffs[p] == 0.0) continue;
        double binom = 1.0;  // C(p, q) built incrementally over q
        for (std::size_t q = 0; q <= p; ++q) {
            shifted[q] += coeffs[p] * binom * std::pow(c0, static_cast<double>(p - q));
            binom *= static_cast<double>(p - q) / static_cast<double>(q + 1);
        }
    }
    return from_taylor(c0, std::move(shifted));
}

double Nonlinearity::evaluate(double x) const { return evaluate_shifted(x - c0); }

double Nonlinearity::evaluate_shifted(double y) const {
    double acc = 0.0;
    for (auto it = taylor.rbegin(); it != taylor.rend(); ++it) acc = acc * y + *it;
    return acc;
}

ValidationReport validate(const Problem& p) {
    ValidationReport rep;
    rep.zero_order = p.g.zero_order;
    rep.lead_coeff = p.g.lead_coeff;
    rep.forcing_degree = p.forcing.max_mode_norm();

    try {
        validate(p.omega);
    } catch (const ConfigError& e) {
        rep.errors.emplace_back(e.what());
    }
    if (p.forcing.dim() != p.omega.dim())
        rep.errors.push_back("forcing dimension does not match the frequency vector");
    if (!std::isfinite(p.epsilon)) rep.errors.push_back("epsilon is not finite");

    double defect = p.forcing.conjugacy_defect();
    if (defect > 1e-13) {
        std::ostringstream os;
        os << "forcing is not a real function: conjugacy defect " << defect;
        rep.errors.push_back(os.str());
    }

    if (p.g.zero_order == 0) {
        rep.errors.push_back("a-zero: every derivative of g vanishes at c0; no scheme applies");
    } else if (p.g.zero_order % 2 == 0) {
        std::ostringstream os;
        os << "even-order-zero: first nonvanishing derivative of g at c0 has even order "
           << p.g.zero_order << "; no attracting response exists";
        rep.errors.push_back(os.str());
    } else {
        rep.solver = p.g.zero_order == 1 ? SolverKind::NonDegenerate : SolverKind::Degenerate;
    }
    for (std::size_t q = 1; q < p.g.taylor.size() && q < static_cast<std::size_t>(p.g.zero_order); ++q) {
        if (std::abs(p.g.taylor[q]) > kCoeffZeroTol) {
            rep.errors.push_back("taylor coefficients below the leading order do not vanish");
            break;
        }
    }

    double g_at_c0 = p.g.taylor.empty() ? 0.0 : p.g.taylor[0];
    double f_avg = p.forcing.average().real();
    if (std::abs(g_at_c0 - f_avg) > 1e-10) {
        std::ostringstream os;
        os << "average-mismatch: g(c0) = " << g_at_c0 << " but the forcing average is " << f_avg
           << "; the working point does not balance the average forcing";
        rep.errors.push_back(os.str());
    }

    rep.ok = rep.errors.empty();
    return rep;
}

void require_valid(const Problem& p) {
    ValidationReport rep = validate(p);
    if (rep.ok) return;
    std::string joined = "invalid problem:";
    for (const auto& e : rep.errors) joined += "\n  " + e;
    throw ConfigError(joined);
}

std::vector<double> shifted_g_tail(const Nonlinearity& g) {
    std::vector<double> tail = g.taylor;
    std::size_t cut = static_cast<std::size_t>(std::max(2, g.zero_order));
    for (std::size_t p = 0; p < tail.size() && p < cut; ++p) tail[p] = 0.0;
    return tail;
}

}  // namespace qpr
