#include "qpr/solver_n3.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qpr/errors.hpp"
#include "qpr/kernels.hpp"

namespace qpr::n3 {

namespace {

constexpr double kDivisorFloor = 1e-300;

void require_scheme(const Problem& p) {
    require_valid(p);
    if (p.g.zero_order < 3)
        throw ConfigError("nonlinearity has a simple zero; use the nondegenerate scheme");
}

FourierSeries x1_series(const Problem& p, double zeta, const FourierSeries& u1) {
    FourierSeries x1 = u1;
    x1.add_coeff(Mode(static_cast<std::size_t>(p.omega.dim()), 0), zeta);
    return x1;
}

// w^0, w^1, ..., w^max as convolution powers; w^0 is the unit constant.
std::vector<FourierSeries> powers_up_to(const FourierSeries& w, int max_power) {
    std::vector<FourierSeries> pw;
    pw.push_back(FourierSeries::constant(w.dim(), 1.0));
    for (int m = 1; m <= max_power; ++m) pw.push_back(convolve(pw.back(), w));
    return pw;
}

double binom(int n, int k) {
    double b = 1.0;
    for (int j = 1; j <= k; ++j) b *= static_cast<double>(n - j + 1) / static_cast<double>(j);
    return b;
}

}  // namespace

FourierSeries DegenerateState::xi_sum() const {
    FourierSeries sum(u1.dim(), true);
    for (const auto& x : xi_orders) sum += x;
    return sum;
}

std::complex<double> end_propagator(double eps, double s) {
    // 1 / (i s (1 + i eps s)) = 1 / (-eps s^2 + i s)
    return 1.0 / std::complex<double>{-eps * s * s, s};
}

std::complex<double> internal_divisor(double eps, double s, double b, int n) {
    return std::complex<double>{-eps * s * s + b * std::pow(eps, n), s};
}

std::complex<double> internal_propagator(double eps, double s, double b, int n) {
    return 1.0 / internal_divisor(eps, s, b, n);
}

FourierSeries first_order_response(const Problem& p) {
    require_scheme(p);
    FourierSeries u(p.omega.dim(), true);
    const Mode zero(static_cast<std::size_t>(p.omega.dim()), 0);
    for (const auto& [nu, f] : p.forcing.terms()) {
        if (nu == zero) continue;
        double s = p.omega.dot(nu);
        std::complex<double> d{-p.epsilon * s * s, s};
        if (std::abs(d) < kDivisorFloor) {
            std::ostringstream os;
            os << "resonant-divisor: omega . nu = " << s << " too small in the averaged response";
            throw SolverError(os.str());
        }
        u.set_coeff(nu, f / d);
    }
    return u;
}

double alpha_min(const Problem& p, std::int64_t budget) {
    validate(p.omega);
    const int degree = p.forcing.max_mode_norm();
    const std::int64_t radius = static_cast<std::int64_t>(p.g.zero_order + 1) * degree;
    if (radius < 1) return std::numeric_limits<double>::infinity();
    std::int64_t count = kernels::lattice_ball_count(p.omega.dim(), radius);
    if (count > budget) {
        std::ostringstream os;
        os << "budget-exceeded: alpha_min ball " << radius << " has " << count << " points";
        throw SolverError(os.str());
    }
    auto r = kernels::lattice_min_parallel(p.omega.omega, radius);
    if (r.exact_zero)
        throw ConfigError("exact-resonance-found: omega . nu = 0 within the alpha_min ball");
    return r.min_abs;
}

Counterterm counterterm(const Problem& p, double zeta) {
    require_scheme(p);
    const int n = p.g.zero_order;
    const std::vector<double> tail = shifted_g_tail(p.g);
    const FourierSeries x1 = x1_series(p, zeta, first_order_response(p));
    const auto pw = powers_up_to(x1, std::max(0, static_cast<int>(tail.size()) - 2));

    Counterterm ct;
    for (std::size_t q = static_cast<std::size_t>(n); q < tail.size(); ++q) {
        if (tail[q] == 0.0) continue;
        double avg = pw[q - 1].average().real();
        ct.b += static_cast<double>(q) * tail[q] *
                std::pow(p.epsilon, static_cast<double>(q) - static_cast<double>(n)) * avg;
        if (q == static_cast<std::size_t>(n)) ct.b0 = static_cast<double>(n) * tail[q] * avg;
    }
    return ct;
}

namespace {

// Adds weight * xi^[k_1] * ... * xi^[k_s] * base over ordered tuples with
// k_i >= 2 summing to `remaining`. max_order caps each factor at the orders
// actually computed so far.
void add_xi_products(const DegenerateState& st, int max_order, int remaining, int parts,
                     const FourierSeries& prefix, double weight, FourierSeries& acc) {
    if (parts == 1) {
        if (remaining < 2 || remaining > max_order) return;
        const FourierSeries& last = st.xi(remaining);
        if (last.empty()) return;
        FourierSeries term = convolve(prefix, last);
        term *= weight;
        acc += term;
        return;
    }
    for (int k1 = 2; remaining - k1 >= 2 * (parts - 1); ++k1) {
        if (k1 > max_order) break;
        const FourierSeries& factor = st.xi(k1);
        if (factor.empty()) continue;
        add_xi_products(st, max_order, remaining - k1, parts - 1, convolve(prefix, factor), weight,
                        acc);
    }
}

}  // namespace

FourierSeries recursion_step(const Problem& p, const DegenerateState& st, int k) {
    if (k < 2) throw std::invalid_argument("recursion_step: k must be >= 2");
    if (static_cast<int>(st.xi_orders.size()) < k - 2)
        throw std::invalid_argument("recursion_step: need all xi orders below k");
    const int n = p.g.zero_order;
    const std::vector<double> tail = shifted_g_tail(p.g);

    FourierSeries w = x1_series(p, st.zeta, st.u1);
    w *= p.epsilon;
    const auto w_pow = powers_up_to(w, std::max(0, static_cast<int>(tail.size()) - 1));

    // Order k-1 coefficient of G(mu w + xi) with each w carrying one power of
    // mu and each xi^[j] carrying j of them.
    FourierSeries rhs(p.omega.dim(), true);
    for (std::size_t q = static_cast<std::size_t>(n); q < tail.size(); ++q) {
        if (tail[q] == 0.0) continue;
        const int qi = static_cast<int>(q);
        for (int s = 0; s <= qi; ++s) {
            const int rem = (k - 1) - (qi - s);  // total order carried by the xi factors
            if (s == 0) {
                if (rem == 0) {
                    FourierSeries term = w_pow[q];
                    term *= tail[q];
                    rhs += term;
                }
                continue;
            }
            if (rem < 2 * s) continue;
            FourierSeries base = w_pow[static_cast<std::size_t>(qi - s)];
            if (s == 1) base = without_average(base);  // the linear-in-xi average is re-absorbed by b
            if (base.empty()) continue;
            add_xi_products(st, static_cast<int>(st.xi_orders.size()) + 1, rem, s, base,
                            tail[q] * binom(qi, s), rhs);
        }
    }

    FourierSeries out(p.omega.dim(), true);
    const Mode zero(static_cast<std::size_t>(p.omega.dim()), 0);
    for (const auto& [nu, c] : rhs.terms()) {
        if (nu == zero) continue;  // the zero mode is balanced by the zeta equation
        double sline = p.omega.dot(nu);
        std::complex<double> d = internal_divisor(p.epsilon, sline, st.b, n);
        if (std::abs(d) < kDivisorFloor) {
            std::ostringstream os;
            os << "resonant-divisor: dressed divisor too small at omega . nu = " << sline;
            throw SolverError(os.str());
        }
        out.set_coeff(nu, -p.epsilon * c / d);
    }
    return out;
}

namespace {

std::vector<double> fbar_coefficients(const Problem& p, const FourierSeries& u1) {
    const int n = p.g.zero_order;
    const auto pw = powers_up_to(u1, n);
    std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
    for (int j = 0; j <= n; ++j)
        c[static_cast<std::size_t>(j)] = binom(n, j) * pw[static_cast<std::size_t>(n - j)].average().real();
    return c;
}

double poly_eval(const std::vector<double>& c, double z) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
}

double poly_derivative(const std::vector<double>& c, double z) {
    double acc = 0.0;
    for (std::size_t j = c.size(); j-- > 1;)
        acc = acc * z + static_cast<double>(j) * c[j];
    return acc;
}

// Unique real root of the odd-degree monic-up-to-scale average polynomial:
// bisection inside the Cauchy bound, then Newton polish.
double fbar_root(const std::vector<double>& c) {
    double lead = c.back();
    if (lead == 0.0) throw SolverError("average polynomial lost its leading coefficient");
    double radius = 1.0;
    for (std::size_t j = 0; j + 1 < c.size(); ++j) radius += std::abs(c[j] / lead);
    double lo = -radius, hi = radius;
    double flo = poly_eval(c, lo), fhi = poly_eval(c, hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0))
        throw SolverError("no-real-root: the average polynomial does not change sign");
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = poly_eval(c, mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double z = 0.5 * (lo + hi);
    for (int i = 0; i < 12; ++i) {
        double d = poly_derivative(c, z);
        if (d == 0.0) break;
        double step = poly_eval(c, z) / d;
        z -= step;
        if (std::abs(step) < 1e-16 * (1.0 + std::abs(z))) break;
    }
    return z;
}

// Average of G(w + xi) with the linear-average subtraction, scaled by
// eps^{1-n}: the scalar equation that fixes zeta.
double f2_average(const Problem& p, const DegenerateState& st) {
    const int n = p.g.zero_order;
    const std::vector<double> tail = shifted_g_tail(p.g);
    FourierSeries w = x1_series(p, st.zeta, st.u1);
    w *= p.epsilon;
    const auto w_pow = powers_up_to(w, std::max(0, static_cast<int>(tail.size()) - 1));
    const auto xi_pow = powers_up_to(st.xi_sum(), static_cast<int>(tail.size()));

    std::complex<double> avg = 0.0;
    for (std::size_t q = static_cast<std::size_t>(n); q < tail.size(); ++q) {
        if (tail[q] == 0.0) continue;
        const int qi = static_cast<int>(q);
        for (int s = 0; s <= qi; ++s) {
            FourierSeries base = w_pow[static_cast<std::size_t>(qi - s)];
            if (s == 1) base = without_average(base);
            avg += tail[q] * binom(qi, s) *
                   convolve(xi_pow[static_cast<std::size_t>(s)], base).average();
        }
    }
    return std::pow(p.epsilon, 1 - n) * avg.real();
}

// Rebuilds the whole expansion for one zeta choice.
DegenerateState build_state(const Problem& p, double zeta, int K, const FourierSeries& u1) {
    DegenerateState st;
    st.zeta = zeta;
    st.u1 = u1;
    st.K = K;
    Counterterm ct = counterterm(p, zeta);
    st.b = ct.b;
    st.b0 = ct.b0;
    for (int k = 2; k <= K; ++k) st.xi_orders.push_back(recursion_step(p, st, k));
    return st;
}

}  // namespace

DegenerateState solve(const Problem& p, int K) {
    require_scheme(p);
    if (K < 1) throw std::invalid_argument("solve: K must be >= 1");
    const FourierSeries u1 = first_order_response(p);
    const std::vector<double> fbar = fbar_coefficients(p, u1);
    const double tol_scale = [&] {
        double m = 1.0;
        for (double c : fbar) m = std::max(m, std::abs(c));
        return m;
    }();
    const double tol = 1e-11 * tol_scale;
    const double zeta0 = fbar_root(fbar);

    if (p.epsilon == 0.0) {
        DegenerateState st;
        st.zeta = zeta0;
        st.u1 = u1;
        st.K = K;
        Counterterm ct = counterterm(p, zeta0);
        st.b = ct.b;
        st.b0 = ct.b0;
        st.alpha = alpha_min(p);
        st.fbar_coeffs = fbar;
        st.fbar_derivative_gap =
            std::abs(poly_derivative(fbar, zeta0) - st.b0 / p.g.lead_coeff);
        return st;
    }

    const double diverge_bound = 2.0 * std::abs(zeta0) + 1.0;
    DegenerateState st = build_state(p, zeta0, K, u1);
    double h0 = f2_average(p, st);
    st.f2_residual = std::abs(h0);
    int iterations = 0;

    if (std::abs(h0) > tol) {
        // Secant on zeta |-> F2(zeta), seeded at the polynomial root.
        double z0 = zeta0;
        double z1 = zeta0 + 1e-3 * (1.0 + std::abs(zeta0));
        DegenerateState st1 = build_state(p, z1, K, u1);
        double h1 = f2_average(p, st1);
        ++iterations;
        while (std::abs(h1) > tol) {
            if (++iterations > 64)
                throw SolverError("outer-iteration-divergence: zeta solve did not converge");
            double denom = h1 - h0;
            double z2 = denom == 0.0 ? z1 + 1e-3 * (1.0 + std::abs(z1))
                                     : z1 - h1 * (z1 - z0) / denom;
            if (!std::isfinite(z2) || std::abs(z2) > diverge_bound)
                throw SolverError("outer-iteration-divergence: zeta left the trust interval");
            z0 = z1;
            h0 = h1;
            z1 = z2;
            st1 = build_state(p, z1, K, u1);
            h1 = f2_average(p, st1);
        }
        st = std::move(st1);
        st.f2_residual = std::abs(h1);
    }

    st.outer_iterations = iterations;
    st.alpha = alpha_min(p);
    st.fbar_coeffs = fbar;
    st.fbar_derivative_gap = std::abs(poly_derivative(fbar, st.zeta) - st.b0 / p.g.lead_coeff);
    if (st.b == 0.0) throw SolverError("counterterm b vanished; the dressed divisor is unusable");
    return st;
}

SeriesSolution assemble(const Problem& p, const DegenerateState& st) {
    SeriesSolution s;
    s.epsilon = p.epsilon;
    s.c0 = p.g.c0;
    s.K = st.K;
    FourierSeries lead = x1_series(p, st.zeta, st.u1);
    lead *= p.epsilon;
    s.orders.push_back(lead);
    for (const auto& x : st.xi_orders) s.orders.push_back(x);

    double largest_root = 0.0;
    for (int k = 1; k <= static_cast<int>(s.orders.size()); ++k) {
        double norm = s.orders[static_cast<std::size_t>(k) - 1].sup_coeff_norm();
        if (norm > 0.0)
            largest_root = std::max(largest_root, std::pow(norm, 1.0 / static_cast<double>(k)));
    }
    s.mu_radius_estimate =
        largest_root == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / largest_root;
    s.radius_warning = s.mu_radius_estimate <= 1.0;
    return s;
}

}  // namespace qpr::n3
