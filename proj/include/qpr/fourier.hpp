#pragma once

#include <complex>
#include <map>
#include <span>
#include <vector>

namespace qpr {

// Integer mode vector nu on the d-dimensional frequency lattice.
using Mode = std::vector<int>;

int l1_norm(const Mode& nu);
Mode negated(const Mode& nu);

// Sparse trigonometric polynomial sum_nu c_nu e^{i nu.psi} on the d-torus.
// Coefficients live in a lexicographically ordered map so iteration order,
// arithmetic, and serialization are deterministic. Exact zeros are pruned on
// write; nothing else is ever dropped.
class FourierSeries {
  public:
    using Coeff = std::complex<double>;
    using Map = std::map<Mode, Coeff>;

    FourierSeries() : FourierSeries(1) {}
    explicit FourierSeries(int dim, bool declared_real = false);
    static FourierSeries constant(int dim, Coeff value, bool declared_real = true);

    int dim() const { return dim_; }
    bool declared_real() const { return declared_real_; }
    void set_declared_real(bool v) { declared_real_ = v; }

    bool empty() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const Map& terms() const { return terms_; }

    Coeff coeff(const Mode& nu) const;
    void set_coeff(const Mode& nu, Coeff c);
    void add_coeff(const Mode& nu, Coeff c);

    Coeff average() const;  // the zero-mode coefficient
    int max_mode_norm() const;
    double sup_coeff_norm() const;
    double l1_coeff_norm() const;

    Coeff evaluate(std::span<const double> psi) const;

    // max |conj(c_nu) - c_{-nu}| over the support; 0 for the empty series.
    double conjugacy_defect() const;
    bool is_conjugate_symmetric(double tol = 1e-13) const { return conjugacy_defect() <= tol; }

    FourierSeries& operator+=(const FourierSeries& rhs);
    FourierSeries& operator-=(const FourierSeries& rhs);
    FourierSeries& operator*=(Coeff scalar);

    friend FourierSeries operator+(FourierSeries lhs, const FourierSeries& rhs) { return lhs += rhs; }
    friend FourierSeries operator-(FourierSeries lhs, const FourierSeries& rhs) { return lhs -= rhs; }
    friend FourierSeries operator*(Coeff scalar, FourierSeries s) { return s *= scalar; }

  private:
    void check_mode(const Mode& nu) const;

    int dim_;
    bool declared_real_;
    Map terms_;
};

FourierSeries convolve(const FourierSeries& a, const FourierSeries& b);

// (omega . d/dpsi)^order, order in {1, 2}.
FourierSeries directional_derivative(const FourierSeries& s, std::span<const double> omega, int order);

// poly[p] is the coefficient of u^p; evaluated by Horner over convolution.
FourierSeries compose_polynomial(std::span<const double> poly, const FourierSeries& u);

// Copy with the zero mode removed.
FourierSeries without_average(FourierSeries s);

}  // namespace qpr
