#include "qpr/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace qpr {

int l1_norm(const Mode& nu) {
    int s = 0;
    for (int c : nu) s += std::abs(c);
    return s;
}

Mode negated(const Mode& nu) {
    Mode m(nu.size());
    std::transform(nu.begin(), nu.end(), m.begin(), std::negate<int>());
    return m;
}

FourierSeries::FourierSeries(int dim, bool declared_real) : dim_(dim), declared_real_(declared_real) {
    if (dim < 1) throw std::invalid_argument("FourierSeries: dim must be >= 1");
}

FourierSeries FourierSeries::constant(int dim, Coeff value, bool declared_real) {
    FourierSeries s(dim, declared_real);
    s.set_coeff(Mode(static_cast<std::size_t>(dim), 0), value);
    return s;
}

void FourierSeries::check_mode(const Mode& nu) const {
    if (static_cast<int>(nu.size()) != dim_)
        throw std::invalid_argument("FourierSeries: mode dimension mismatch");
}

FourierSeries::Coeff FourierSeries::coeff(const Mode& nu) const {
    check_mode(nu);
    auto it = terms_.find(nu);
    return it == terms_.end() ? Coeff{0.0, 0.0} : it->second;
}

void FourierSeries::set_coeff(const Mode& nu, Coeff c) {
    check_mode(nu);
    if (c == Coeff{0.0, 0.0})
        terms_.erase(nu);
    else
        terms_[nu] = c;
}

void FourierSeries::add_coeff(const Mode& nu, Coeff c) {
    check_mode(nu);
    auto [it, inserted] = terms_.try_emplace(nu, c);
    if (!inserted) it->second += c;
    if (it->second == Coeff{0.0, 0.0}) terms_.erase(it);
}

FourierSeries::Coeff FourierSeries::average() const {
    return coeff(Mode(static_cast<std::size_t>(dim_), 0));
}

int FourierSeries::max_mode_norm() const {
    int m = 0;
    for (const auto& [nu, c] : terms_) m = std::max(m, l1_norm(nu));
    return m;
}

double FourierSeries::sup_coeff_norm() const {
    double m = 0.0;
    for (const auto& [nu, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

double FourierSeries::l1_coeff_norm() const {
    double s = 0.0;
    for (const auto& [nu, c] : terms_) s += std::abs(c);
    return s;
}

FourierSeries::Coeff FourierSeries::evaluate(std::span<const double> psi) const {
    if (static_cast<int>(psi.size()) != dim_)
        throw std::invalid_argument("FourierSeries: evaluation point dimension mismatch");
    Coeff sum{0.0, 0.0};
    for (const auto& [nu, c] : terms_) {
        double phase = 0.0;
        for (int i = 0; i < dim_; ++i) phase += nu[static_cast<std::size_t>(i)] * psi[static_cast<std::size_t>(i)];
        sum += c * std::polar(1.0, phase);
    }
    return sum;
}

double FourierSeries::conjugacy_defect() const {
    double worst = 0.0;
    for (const auto& [nu, c] : terms_)
        worst = std::max(worst, std::abs(std::conj(c) - coeff(negated(nu))));
    return worst;
}

FourierSeries& FourierSeries::operator+=(const FourierSeries& rhs) {
    if (rhs.dim_ != dim_) throw std::invalid_argument("FourierSeries: dimension mismatch in +");
    for (const auto& [nu, c] : rhs.terms_) add_coeff(nu, c);
    declared_real_ = declared_real_ && rhs.declared_real_;
    return *this;
}

FourierSeries& FourierSeries::operator-=(const FourierSeries& rhs) {
    if (rhs.dim_ != dim_) throw std::invalid_argument("FourierSeries: dimension mismatch in -");
    for (const auto& [nu, c] : rhs.terms_) add_coeff(nu, -c);
    declared_real_ = declared_real_ && rhs.declared_real_;
    return *this;
}

FourierSeries& FourierSeries::operator*=(Coeff scalar) {
    if (scalar == Coeff{0.0, 0.0}) {
        terms_.clear();
        return *this;
    }
    for (auto& [nu, c] : terms_) c *= scalar;
    declared_real_ = declared_real_ && scalar.imag() == 0.0;
    return *this;
}

FourierSeries convolve(const FourierSeries& a, const FourierSeries& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("convolve: dimension mismatch");
    FourierSeries out(a.dim(), a.declared_real() && b.declared_real());
    Mode sum(static_cast<std::size_t>(a.dim()));
    for (const auto& [na, ca] : a.terms()) {
        for (const auto& [nb, cb] : b.terms()) {
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = na[i] + nb[i];
            out.add_coeff(sum, ca * cb);
        }
    }
    return out;
}

FourierSeries directional_derivative(const FourierSeries& s, std::span<const double> omega, int order) {
    if (static_cast<int>(omega.size()) != s.dim())
        throw std::invalid_argument("directional_derivative: omega dimension mismatch");
    if (order != 1 && order != 2) throw std::invalid_argument("directional_derivative: order must be 1 or 2");
    FourierSeries out(s.dim(), false);
    for (const auto& [nu, c] : s.terms()) {
        double w = 0.0;
        for (std::size_t i = 0; i < nu.size(); ++i) w += omega[i] * nu[i];
        // d/dt brings down (i w); twice for order 2.
        std::complex<double> factor = order == 1 ? std::complex<double>{0.0, w}
                                                 : std::complex<double>{-w * w, 0.0};
        out.add_coeff(nu, factor * c);
    }
    out.set_declared_real(s.declared_real());
    return out;
}

FourierSeries compose_polynomial(std::span<const double> poly, const FourierSeries& u) {
    FourierSeries acc(u.dim(), u.declared_real());
    if (poly.empty()) return acc;
    acc = FourierSeries::constant(u.dim(), poly.back(), u.declared_real());
    for (auto p = static_cast<std::ptrdiff_t>(poly.size()) - 2; p >= 0; --p) {
        acc = convolve(acc, u);
        acc.add_coeff(Mode(static_cast<std::size_t>(u.dim()), 0), poly[static_cast<std::size_t>(p)]);
    }
    return acc;
}

FourierSeries without_average(FourierSeries s) {
    s.set_coeff(Mode(static_cast<std::size_t>(s.dim()), 0), {0.0, 0.0});
    return s;
}

}  // namespace qpr
