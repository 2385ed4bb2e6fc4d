#include "qpr/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qpr::kernels {

namespace {

// (value, mode) ordering with lexicographic tie-break, so the reported
// minimizer does not depend on enumeration or thread order.
bool better(double val, const Mode& mode, double best_val, const Mode& best_mode) {
    if (val != best_val) return val < best_val;
    return mode < best_mode;
}

void merge(LatticeMinResult& into, const LatticeMinResult& from) {
    into.points_scanned += from.points_scanned;
    if (from.exact_zero &&
        (!into.exact_zero || from.zero_mode < into.zero_mode)) {
        into.exact_zero = true;
        into.zero_mode = from.zero_mode;
    }
    if (!from.argmin.empty() &&
        (into.argmin.empty() || better(from.min_abs, from.argmin, into.min_abs, into.argmin))) {
        into.min_abs = from.min_abs;
        into.argmin = from.argmin;
    }
}

void consider(LatticeMinResult& r, const Mode& nu, double dot) {
    ++r.points_scanned;
    double a = std::abs(dot);
    if (a == 0.0) {
        if (!r.exact_zero || nu < r.zero_mode) {
            r.exact_zero = true;
            r.zero_mode = nu;
        }
        return;
    }
    if (r.argmin.empty() || better(a, nu, r.min_abs, r.argmin)) {
        r.min_abs = a;
        r.argmin = nu;
    }
}

// Fills nu[i..] with every combination of total l1 weight <= rem.
void scan_free_suffix(std::span<const double> omega, Mode& nu, std::size_t i, std::int64_t rem,
                      double dot, LatticeMinResult& r) {
    if (i == nu.size()) {
        consider(r, nu, dot);
        return;
    }
    for (std::int64_t v = -rem; v <= rem; ++v) {
        nu[i] = static_cast<int>(v);
        scan_free_suffix(omega, nu, i + 1, rem - std::abs(v), dot + omega[i] * static_cast<double>(v), r);
    }
    nu[i] = 0;
}

struct Task {
    std::size_t lead;      // index of the first nonzero component
    std::int64_t value;    // its (positive) value
};

std::vector<Task> representative_tasks(std::size_t dim, std::int64_t radius) {
    std::vector<Task> tasks;
    for (std::size_t j = 0; j < dim; ++j)
        for (std::int64_t v = 1; v <= radius; ++v) tasks.push_back({j, v});
    return tasks;
}

LatticeMinResult run_task(std::span<const double> omega, std::int64_t radius, const Task& t) {
    LatticeMinResult r;
    Mode nu(omega.size(), 0);
    nu[t.lead] = static_cast<int>(t.value);
    scan_free_suffix(omega, nu, t.lead + 1, radius - t.value,
                     omega[t.lead] * static_cast<double>(t.value), r);
    return r;
}

void check_budget(int dim, std::int64_t radius) {
    if (dim < 1) throw std::invalid_argument("lattice_min: dimension must be >= 1");
    if (radius < 1) throw std::invalid_argument("lattice_min: radius must be >= 1");
}

}  // namespace

std::int64_t lattice_ball_count(int dim, std::int64_t radius) {
    // sum_i 2^i C(dim, i) C(radius, i): choose i nonzero coordinates, their
    // signs, and a composition of weight <= radius among them.
    const std::int64_t cap = std::numeric_limits<std::int64_t>::max();
    std::int64_t total = 0;
    std::int64_t limit = std::min<std::int64_t>(dim, radius);
    for (std::int64_t i = 0; i <= limit; ++i) {
        long double term = 1.0L;  // 2^i C(dim,i) C(radius,i)
        for (std::int64_t j = 1; j <= i; ++j)
            term *= 2.0L * static_cast<long double>(dim - j + 1) *
                    static_cast<long double>(radius - j + 1) /
                    (static_cast<long double>(j) * static_cast<long double>(j));
        if (term > static_cast<long double>(cap) - static_cast<long double>(total)) return cap;
        total += static_cast<std::int64_t>(term + 0.5L);
    }
    return total;
}

LatticeMinResult lattice_min_serial(std::span<const double> omega, std::int64_t radius) {
    check_budget(static_cast<int>(omega.size()), radius);
    LatticeMinResult out;
    for (const Task& t : representative_tasks(omega.size(), radius)) {
        LatticeMinResult r = run_task(omega, radius, t);
        merge(out, r);
    }
    return out;
}

LatticeMinResult lattice_min_parallel(std::span<const double> omega, std::int64_t radius) {
    check_budget(static_cast<int>(omega.size()), radius);
    const std::vector<Task> tasks = representative_tasks(omega.size(), radius);
    LatticeMinResult out;
#ifdef _OPENMP
#pragma omp parallel
    {
        LatticeMinResult local;
#pragma omp for schedule(dynamic) nowait
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(tasks.size()); ++i) {
            LatticeMinResult r = run_task(omega, radius, tasks[static_cast<std::size_t>(i)]);
            merge(local, r);
        }
#pragma omp critical(qpr_lattice_merge)
        merge(out, local);
    }
#else
    for (const Task& t : tasks) {
        LatticeMinResult r = run_task(omega, radius, t);
        merge(out, r);
    }
#endif
    return out;
}

LatticeMinResult lattice_min_over(std::span<const double> omega, const std::vector<Mode>& candidates) {
    LatticeMinResult out;
    for (const Mode& nu : candidates) {
        if (nu.size() != omega.size())
            throw std::invalid_argument("lattice_min_over: candidate dimension mismatch");
        double dot = 0.0;
        for (std::size_t i = 0; i < nu.size(); ++i) dot += omega[i] * nu[i];
        consider(out, nu, dot);
    }
    return out;
}

namespace {

double grid_point_abs(const FourierSeries& s, int per_dim, std::int64_t flat) {
    thread_local std::vector<double> psi;
    psi.assign(static_cast<std::size_t>(s.dim()), 0.0);
    const double step = 2.0 * M_PI / static_cast<double>(per_dim);
    for (int i = 0; i < s.dim(); ++i) {
        psi[static_cast<std::size_t>(i)] = step * static_cast<double>(flat % per_dim);
        flat /= per_dim;
    }
    return std::abs(s.evaluate(psi));
}

std::int64_t grid_total(const FourierSeries& s, int per_dim) {
    if (per_dim < 1) throw std::invalid_argument("grid_sup: per_dim must be >= 1");
    std::int64_t total = 1;
    for (int i = 0; i < s.dim(); ++i) {
        if (total > std::numeric_limits<std::int64_t>::max() / per_dim)
            throw std::invalid_argument("grid_sup: grid too large");
        total *= per_dim;
    }
    return total;
}

}  // namespace

double grid_sup_serial(const FourierSeries& s, int per_dim) {
    const std::int64_t total = grid_total(s, per_dim);
    double sup = 0.0;
    for (std::int64_t i = 0; i < total; ++i) sup = std::max(sup, grid_point_abs(s, per_dim, i));
    return sup;
}

double grid_sup_parallel(const FourierSeries& s, int per_dim) {
    const std::int64_t total = grid_total(s, per_dim);
    double sup = 0.0;
#ifdef _OPENMP
#pragma omp parallel for reduction(max : sup) schedule(static)
    for (std::int64_t i = 0; i < total; ++i) sup = std::max(sup, grid_point_abs(s, per_dim, i));
#else
    for (std::int64_t i = 0; i < total; ++i) sup = std::max(sup, grid_point_abs(s, per_dim, i));
#endif
    return sup;
}

int thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace qpr::kernels
