#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qpr/solver_n3.hpp"

namespace qpr::trees {

inline constexpr std::int64_t kDefaultTreeBudget = 1'000'000;

enum class Scheme { NonDegenerate, Degenerate };

// One node of a labelled rooted tree. End nodes carry a mode label; internal
// nodes carry their ordered children. Sibling order is significant: the
// expansion sums over ordered branchings, matching the ordered index tuples
// of the recursions, so no symmetry multiplicities appear in values.
struct Node {
    bool is_end = true;
    Mode mode;                   // end nodes only
    std::vector<Node> children;  // internal nodes only
    Mode momentum;               // sum of end modes below (incl. this one if end)

    int branching() const { return static_cast<int>(children.size()); }
};

struct Tree {
    Scheme scheme = Scheme::NonDegenerate;
    int order = 0;  // total node count
    Node root;      // the node the root line exits

    int end_count() const;
    int internal_count() const;
};

// All trees of the given order whose root line carries momentum nu and which
// satisfy the scheme constraints for this problem's nonlinearity/forcing.
std::vector<Tree> enumerate(Scheme scheme, int k, const Mode& nu, const Problem& p,
                            std::int64_t budget = kDefaultTreeBudget);

// Same, over every admissible root momentum at once.
std::vector<Tree> enumerate_all(Scheme scheme, int k, const Problem& p,
                                std::int64_t budget = kDefaultTreeBudget);

// Product of node factors and line propagators. The degenerate scheme needs
// zeta and the dressed divisor constant, taken from state.
std::complex<double> tree_value(const Tree& t, const Problem& p,
                                const n3::DegenerateState* state = nullptr);

// Child-sorted structural encoding; equal trees (up to sibling order) get
// equal strings. Canonicalizing is idempotent by construction.
std::string canonical_encoding(const Tree& t);

std::string dump(const Tree& t);  // indented, one node per line

struct OracleReport {
    bool pass = false;
    double max_rel_error = 0.0;
    int worst_k = 0;
    Mode worst_nu;
    std::int64_t trees_evaluated = 0;
    int k_max = 0;
};

// Re-derives every order-k coefficient as a tree sum and compares with the
// solver output (relative error against the larger magnitude, floor 1e-30).
OracleReport oracle_compare(Scheme scheme, int k_max, const Problem& p, const SeriesSolution& sol,
                            const n3::DegenerateState* state = nullptr,
                            std::int64_t budget = kDefaultTreeBudget);

struct LemmaReport {
    bool pass = false;
    std::int64_t trees_checked = 0;
    std::int64_t violations = 0;
    std::int64_t equality_cases = 0;      // end-count bound tight
    std::int64_t v0_nonempty_trees = 0;   // degenerate scheme only
    int k_max = 0;
    std::vector<std::string> failures;    // first few offending trees, dumped
};

// Exhaustively checks the structural counting bounds on every enumerated
// tree up to k_max: end-node lower bounds, order bounds, and (degenerate
// scheme) the small-divisor node count n*|V0| <= |E| - 2 with the alpha/2
// threshold. Throws VerificationError on any violation.
LemmaReport check_lemmas(Scheme scheme, int k_max, const Problem& p,
                         std::int64_t budget = kDefaultTreeBudget);

}  // namespace qpr::trees
