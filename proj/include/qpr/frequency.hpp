#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qpr/fourier.hpp"

namespace qpr {

inline constexpr std::int64_t kDefaultLatticeBudget = 10'000'000;

struct FrequencyVector {
    std::vector<double> omega;

    int dim() const { return static_cast<int>(omega.size()); }
    double dot(const Mode& nu) const;
};

// Throws ConfigError unless omega is nonempty, finite, and not the zero vector.
void validate(const FrequencyVector& w);

// alpha_n(omega) = min |omega . nu| over 0 < |nu|_1 <= 2^n.
// Throws ConfigError on exact resonance, SolverError when the ball exceeds
// the enumeration budget.
double alpha_n(const FrequencyVector& w, int n, std::int64_t budget = kDefaultLatticeBudget);

// Same minimum restricted to the given support modes with 0 < |nu|_1 <= 2^n.
// Returns nullopt when no support mode lies in the ball.
std::optional<double> beta_n(const FrequencyVector& w, const std::vector<Mode>& support, int n);

struct DiophantineReport {
    int n_max = 0;
    std::vector<double> alpha;                       // index n = 0..n_max
    std::vector<Mode> alpha_argmin;
    std::vector<std::optional<double>> beta;         // nullopt = empty candidate set
    std::vector<std::optional<double>> epsilon_seq;  // 2^-n log(1/beta_n)
    double bryuno_partial = 0.0;                     // sum 2^-n log(1/alpha_n)
    bool epsilon_nonincreasing = true;               // over consecutive defined entries
};

DiophantineReport diagnose(const FrequencyVector& w, const std::vector<Mode>& support, int n_max,
                           std::int64_t budget = kDefaultLatticeBudget);

std::string format_report(const DiophantineReport& r);

}  // namespace qpr
