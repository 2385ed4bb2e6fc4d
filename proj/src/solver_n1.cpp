#include "qpr/solver_n1.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "qpr/errors.hpp"

namespace qpr {

FourierSeries SeriesSolution::total() const {
    if (orders.empty()) throw std::logic_error("SeriesSolution: no orders computed");
    FourierSeries sum(orders.front().dim(), true);
    for (const auto& o : orders) sum += o;
    return sum;
}

namespace n1 {

namespace {

constexpr double kDivisorFloor = 1e-300;

std::complex<double> checked_divisor(const Problem& p, const Mode& nu) {
    std::complex<double> D = propagator(p.epsilon, p.omega.dot(nu), p.g.lead_coeff);
    if (std::abs(D) < kDivisorFloor) {
        std::ostringstream os;
        os << "resonant-divisor: |D| < 1e-300 at nu with omega . nu = " << p.omega.dot(nu);
        throw SolverError(os.str());
    }
    return D;
}

// Adds weight * u^(k1) * ... * u^(kp) (convolution powers) to acc, summed
// over ordered tuples of positive integers with the given remaining total.
void add_composition_products(std::span<const FourierSeries> lower, int remaining, int parts,
                              const FourierSeries& prefix, bool prefix_is_unit, double weight,
                              FourierSeries& acc) {
    if (parts == 1) {
        const FourierSeries& last = lower[static_cast<std::size_t>(remaining) - 1];
        if (last.empty()) return;
        FourierSeries term = prefix_is_unit ? last : convolve(prefix, last);
        term *= weight;
        acc += term;
        return;
    }
    for (int k1 = 1; k1 + (parts - 1) <= remaining; ++k1) {
        const FourierSeries& factor = lower[static_cast<std::size_t>(k1) - 1];
        if (factor.empty()) continue;
        if (prefix_is_unit)
            add_composition_products(lower, remaining - k1, parts - 1, factor, false, weight, acc);
        else
            add_composition_products(lower, remaining - k1, parts - 1, convolve(prefix, factor), false,
                                     weight, acc);
    }
}

void require_scheme(const Problem& p) {
    require_valid(p);
    if (p.g.zero_order != 1)
        throw ConfigError("nonlinearity has a degenerate zero; this scheme needs g'(c0) != 0");
}

}  // namespace

std::complex<double> propagator(double eps, double s, double a) {
    return {eps * (a - s * s), s};
}

FourierSeries first_order(const Problem& p) {
    require_scheme(p);
    FourierSeries u(p.omega.dim(), true);
    const Mode zero(static_cast<std::size_t>(p.omega.dim()), 0);
    for (const auto& [nu, f] : p.forcing.terms()) {
        if (nu == zero) continue;
        u.set_coeff(nu, p.epsilon * f / checked_divisor(p, nu));
    }
    return u;
}

FourierSeries recursion_step(const Problem& p, std::span<const FourierSeries> lower, int k) {
    if (k < 2) throw std::invalid_argument("recursion_step: k must be >= 2");
    if (static_cast<int>(lower.size()) < k - 1)
        throw std::invalid_argument("recursion_step: need all lower orders");
    if (std::abs(p.g.lead_coeff) == 0.0) throw SolverError("a-zero: cannot solve the zero-mode equation");

    const std::vector<double> tail = shifted_g_tail(p.g);
    FourierSeries rhs(p.omega.dim(), true);
    for (std::size_t q = 2; q < tail.size(); ++q) {
        if (tail[q] == 0.0) continue;
        int parts = static_cast<int>(q);
        if (parts > k - 1) continue;  // compositions of k-1 need at most k-1 parts
        add_composition_products(lower.first(static_cast<std::size_t>(k) - 1), k - 1, parts,
                                 FourierSeries(p.omega.dim()), true, tail[q], rhs);
    }

    FourierSeries out(p.omega.dim(), true);
    const Mode zero(static_cast<std::size_t>(p.omega.dim()), 0);
    for (const auto& [nu, c] : rhs.terms()) {
        if (nu == zero)
            out.set_coeff(nu, -c / p.g.lead_coeff);
        else
            out.set_coeff(nu, -p.epsilon * c / checked_divisor(p, nu));
    }
    return out;
}

SeriesSolution solve(const Problem& p, int K) {
    if (K < 1) throw std::invalid_argument("solve: K must be >= 1");
    require_scheme(p);

    SeriesSolution s;
    s.epsilon = p.epsilon;
    s.c0 = p.g.c0;
    s.K = K;
    s.orders.reserve(static_cast<std::size_t>(K));
    s.orders.push_back(first_order(p));
    for (int k = 2; k <= K; ++k) s.orders.push_back(recursion_step(p, s.orders, k));

    double largest_root = 0.0;
    for (int k = 1; k <= K; ++k) {
        double norm = s.order(k).sup_coeff_norm();
        if (norm > 0.0)
            largest_root = std::max(largest_root, std::pow(norm, 1.0 / static_cast<double>(k)));
    }
    s.mu_radius_estimate =
        largest_root == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / largest_root;
    s.radius_warning = s.mu_radius_estimate <= 1.0;
    return s;
}

namespace {

// Solves the symmetric 3x3 normal equations with a tiny ridge so degenerate
// data (single order, single mode) still yields a usable fit.
std::array<double, 3> ridge_solve(std::array<std::array<double, 3>, 3> m, std::array<double, 3> v) {
    for (int i = 0; i < 3; ++i) m[i][i] += 1e-12;
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        std::swap(m[col], m[pivot]);
        std::swap(v[col], v[pivot]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            double f = m[r][col] / m[col][col];
            for (int c = col; c < 3; ++c) m[r][c] -= f * m[col][c];
            v[r] -= f * v[col];
        }
    }
    return {v[0] / m[0][0], v[1] / m[1][1], v[2] / m[2][2]};
}

double envelope_value(const DecayEnvelope& env, double abs_eps, int k, int mode_norm) {
    return env.A * std::pow(env.C, k) * std::exp(-env.xi_prime * mode_norm) *
           std::pow(abs_eps, 0.5 * (k + 1));
}

}  // namespace

DecayEnvelope check_envelope(const Problem& p, const SeriesSolution& s) {
    DecayEnvelope env;
    env.A = 1.0;
    env.C = 1.0;
    env.xi_prime = 1e-12;

    const double abs_eps = std::abs(s.epsilon);
    struct Point {
        int k;
        int mode_norm;
        double log_abs;
    };
    std::vector<Point> data;
    for (int k = 1; k <= s.K; ++k)
        for (const auto& [nu, c] : s.order(k).terms())
            data.push_back({k, l1_norm(nu), std::log(std::abs(c))});

    if (!data.empty()) {
        // Least squares for log|c| - (k+1)/2 log eps = log A + k log C - xi |nu|.
        std::array<std::array<double, 3>, 3> m{};
        std::array<double, 3> v{};
        for (const auto& d : data) {
            double y = d.log_abs - 0.5 * (d.k + 1) * std::log(abs_eps);
            std::array<double, 3> row = {1.0, static_cast<double>(d.k),
                                         -static_cast<double>(d.mode_norm)};
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) m[i][j] += row[i] * row[j];
                v[i] += row[i] * y;
            }
        }
        auto sol = ridge_solve(m, v);
        env.A = std::exp(sol[0]);
        env.C = std::exp(sol[1]);
        env.xi_prime = std::max(sol[2], 1e-12);

        double worst = 0.0;
        for (const auto& d : data)
            worst = std::max(worst, std::exp(d.log_abs) / envelope_value(env, abs_eps, d.k, d.mode_norm));
        env.A *= worst * (1.0 + 1e-9);  // make the fitted bound an actual bound
        worst = 0.0;
        for (const auto& d : data)
            worst = std::max(worst, std::exp(d.log_abs) / envelope_value(env, abs_eps, d.k, d.mode_norm));
        env.worst_slack = worst;
    }

    // Halving eps must shrink order k by at least 2^{-(k+1)/2}, up to 20% slack.
    Problem half = p;
    half.epsilon = p.epsilon / 2.0;
    SeriesSolution s_half = solve(half, s.K);
    for (int k = 1; k <= s.K; ++k) {
        for (const auto& [nu, c] : s.order(k).terms()) {
            double ratio = std::abs(s_half.order(k).coeff(nu)) / std::abs(c);
            double bound = std::pow(2.0, -0.5 * (k + 1)) * 1.2;
            if (ratio > bound) {
                std::ostringstream os;
                os << "envelope-violation: order " << k << " coefficient ratio " << ratio
                   << " exceeds " << bound << " after halving epsilon";
                throw VerificationError(os.str());
            }
        }
    }
    env.scaling_ok = true;
    return env;
}

}  // namespace n1
}  // namespace qpr
