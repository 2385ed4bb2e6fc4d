#include "qpr/frequency.hpp"

#include <cmath>
#include <sstream>

#include "qpr/config_io.hpp"
#include "qpr/errors.hpp"
#include "qpr/kernels.hpp"

namespace qpr {

double FrequencyVector::dot(const Mode& nu) const {
    if (nu.size() != omega.size()) throw std::invalid_argument("FrequencyVector: mode dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < nu.size(); ++i) s += omega[i] * nu[i];
    return s;
}

void validate(const FrequencyVector& w) {
    if (w.omega.empty()) throw ConfigError("frequency vector must have at least one component");
    bool any_nonzero = false;
    for (double c : w.omega) {
        if (!std::isfinite(c)) throw ConfigError("frequency vector has a non-finite component");
        if (c != 0.0) any_nonzero = true;
    }
    if (!any_nonzero) throw ConfigError("frequency vector is identically zero");
}

namespace {

void require_budget(int dim, std::int64_t radius, std::int64_t budget) {
    std::int64_t count = kernels::lattice_ball_count(dim, radius);
    if (count > budget) {
        std::ostringstream os;
        os << "budget-exceeded: lattice ball |nu|_1 <= " << radius << " in dimension " << dim
           << " has " << count << " points, budget " << budget;
        throw SolverError(os.str());
    }
}

[[noreturn]] void throw_resonance(const Mode& nu) {
    throw ConfigError("exact-resonance-found: omega . nu = 0 at nu = " + fmt_mode(nu));
}

}  // namespace

double alpha_n(const FrequencyVector& w, int n, std::int64_t budget) {
    validate(w);
    if (n < 0) throw std::invalid_argument("alpha_n: n must be >= 0");
    const std::int64_t radius = std::int64_t{1} << n;
    require_budget(w.dim(), radius, budget);
    auto r = kernels::lattice_min_parallel(w.omega, radius);
    if (r.exact_zero) throw_resonance(r.zero_mode);
    return r.min_abs;
}

std::optional<double> beta_n(const FrequencyVector& w, const std::vector<Mode>& support, int n) {
    validate(w);
    if (n < 0) throw std::invalid_argument("beta_n: n must be >= 0");
    const std::int64_t radius = std::int64_t{1} << n;
    std::vector<Mode> in_ball;
    for (const Mode& nu : support) {
        int norm = l1_norm(nu);
        if (norm > 0 && norm <= radius) in_ball.push_back(nu);
    }
    if (in_ball.empty()) return std::nullopt;
    auto r = kernels::lattice_min_over(w.omega, in_ball);
    if (r.exact_zero) throw_resonance(r.zero_mode);
    return r.min_abs;
}

DiophantineReport diagnose(const FrequencyVector& w, const std::vector<Mode>& support, int n_max,
                           std::int64_t budget) {
    if (n_max < 0) throw std::invalid_argument("diagnose: n_max must be >= 0");
    DiophantineReport rep;
    rep.n_max = n_max;
    for (int n = 0; n <= n_max; ++n) {
        const std::int64_t radius = std::int64_t{1} << n;
        require_budget(w.dim(), radius, budget);
        auto r = kernels::lattice_min_parallel(w.omega, radius);
        if (r.exact_zero) throw_resonance(r.zero_mode);
        rep.alpha.push_back(r.min_abs);
        rep.alpha_argmin.push_back(r.argmin);
        rep.beta.push_back(beta_n(w, support, n));
        const auto& b = rep.beta.back();
        rep.epsilon_seq.push_back(b ? std::optional<double>(std::ldexp(std::log(1.0 / *b), -n))
                                    : std::nullopt);
        rep.bryuno_partial += std::ldexp(std::log(1.0 / r.min_abs), -n);
    }
    for (std::size_t i = 0, last = 0; i < rep.epsilon_seq.size(); ++i) {
        if (!rep.epsilon_seq[i]) continue;
        if (i > 0 && rep.epsilon_seq[last] && *rep.epsilon_seq[i] > *rep.epsilon_seq[last])
            rep.epsilon_nonincreasing = false;
        last = i;
    }
    return rep;
}

std::string format_report(const DiophantineReport& r) {
    std::ostringstream os;
    os << "n_max " << r.n_max << "\n";
    for (int n = 0; n <= r.n_max; ++n) {
        auto i = static_cast<std::size_t>(n);
        os << "n " << n << " alpha " << fmt(r.alpha[i]) << " argmin " << fmt_mode(r.alpha_argmin[i]);
        os << " beta " << (r.beta[i] ? fmt(*r.beta[i]) : std::string("empty"));
        os << " epsilon " << (r.epsilon_seq[i] ? fmt(*r.epsilon_seq[i]) : std::string("empty"));
        os << "\n";
    }
    os << "bryuno_partial " << fmt(r.bryuno_partial) << "\n";
    os << "epsilon_nonincreasing " << (r.epsilon_nonincreasing ? "yes" : "no") << "\n";
    return os.str();
}

}  // namespace qpr
