#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qpr/fourier.hpp"

namespace qpr::kernels {

// Number of lattice points with |nu|_1 <= radius in dimension dim, saturating
// at int64 max. Used to enforce enumeration budgets before looping.
std::int64_t lattice_ball_count(int dim, std::int64_t radius);

// Minimum of |omega . nu| over 0 < |nu|_1 <= radius. Enumerates one
// representative per {nu, -nu} pair (first nonzero component positive).
// Ties broken toward the lexicographically smaller mode so serial and
// parallel runs agree bit for bit.
struct LatticeMinResult {
    double min_abs = 0.0;
    Mode argmin;
    std::int64_t points_scanned = 0;  // representatives visited
    bool exact_zero = false;          // some omega . nu == 0 exactly
    Mode zero_mode;                   // smallest such nu if exact_zero
};

LatticeMinResult lattice_min_serial(std::span<const double> omega, std::int64_t radius);
LatticeMinResult lattice_min_parallel(std::span<const double> omega, std::int64_t radius);

// Same search restricted to modes representable as sums of +-support vectors:
// here simply a filter predicate over an explicit candidate list.
LatticeMinResult lattice_min_over(std::span<const double> omega, const std::vector<Mode>& candidates);

// sup over the uniform grid psi_j = 2 pi j / per_dim (per dimension) of
// |s(psi)|. Exact agreement between the two variants is a test invariant.
double grid_sup_serial(const FourierSeries& s, int per_dim);
double grid_sup_parallel(const FourierSeries& s, int per_dim);

int thread_count();

}  // namespace qpr::kernels
