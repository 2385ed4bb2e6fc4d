#pragma once

#include <vector>

#include "qpr/solver_n1.hpp"

namespace qpr {

struct ResidualReport {
    int grid_size = 0;               // sample points per torus dimension
    double sup_residual = 0.0;       // sampled sup of |R(psi)| over the grid
    double coeff_l1 = 0.0;           // sum of |R_nu|, an upper bound for the sup
    FourierSeries per_mode_residual; // R as a series
};

// R(psi) = eps (omega.d)^2 u + (omega.d) u + eps g(c0 + u) - eps f, with u the
// summed solution. grid_per_dim <= 0 picks a default based on dimension.
ResidualReport residual(const Problem& p, const SeriesSolution& s, int grid_per_dim = 0);

struct TrajectoryRecord {
    std::vector<double> t;
    std::vector<double> x;
    std::vector<double> v;
    std::vector<double> distance;  // |x(t) - x_sol(t)|

    double final_distance() const { return distance.empty() ? 0.0 : distance.back(); }
};

// Default step: min(shortest forcing period / 20, eps / 5).
double default_dt(const Problem& p);

// Integrates eps x'' + x' + eps g(x) = eps f(omega t) from (x0, v0) with an
// exponential midpoint rule that treats the stiff linear part exactly.
// Records state and distance to the constructed solution every `stride`
// steps (and always at t_end).
TrajectoryRecord integrate(const Problem& p, const SeriesSolution& s, double x0, double v0,
                           double t_end, double dt = 0.0, int stride = 16);

struct OffsetResult {
    double offset = 0.0;
    double final_distance = 0.0;
    double fitted_rate = 0.0;  // exponential decay rate of the distance tail
    bool converged = false;    // final distance <= threshold
};

struct AttractorReport {
    bool pass = false;
    bool exploratory = false;  // hypotheses for attractivity not satisfied
    double t_end = 0.0;
    double threshold = 0.0;
    std::vector<OffsetResult> offsets;
};

// Perturbs the initial condition along x by each offset and checks return to
// the constructed solution within `threshold` by t_end. Marked exploratory
// (never failing) when the contraction hypotheses (first-order scheme,
// positive slope, eps > 0) do not hold.
AttractorReport attractor_test(const Problem& p, const SeriesSolution& s,
                               const std::vector<double>& offsets, double t_end,
                               double threshold = 1e-6, double dt = 0.0);

}  // namespace qpr
