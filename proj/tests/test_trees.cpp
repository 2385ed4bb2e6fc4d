#include <doctest.h>

#include <cmath>
#include <complex>

#include <qpr/errors.hpp>
#include <qpr/trees.hpp>

#include "fixtures.hpp"

using namespace qpr::trees;
using qpr::Mode;
using Coeff = std::complex<double>;

namespace {

// Walks all internal nodes checking the degenerate-scheme exclusion shape:
// exactly one internal child while the end children cancel each other.
bool has_excluded_shape(const Node& n) {
    if (n.is_end) return false;
    int internal_children = 0;
    int end_sum = 0;
    for (const Node& ch : n.children) {
        if (ch.is_end)
            end_sum += ch.mode[0];
        else
            ++internal_children;
    }
    if (internal_children == 1 && end_sum == 0) return true;
    for (const Node& ch : n.children)
        if (has_excluded_shape(ch)) return true;
    return false;
}

}  // namespace

TEST_CASE("order one trees are the forcing modes") {
    auto p = e1_problem();
    auto ts = enumerate(Scheme::NonDegenerate, 1, {1}, p);
    REQUIRE(ts.size() == 1);
    CHECK(ts[0].end_count() == 1);
    CHECK(ts[0].internal_count() == 0);
    Coeff expect = qpr::n1::first_order(p).coeff({1});
    Coeff got = tree_value(ts[0], p);
    CHECK(std::abs(got - expect) <= 1e-13 * std::abs(expect));
    CHECK(enumerate_all(Scheme::NonDegenerate, 1, p).size() == 2);
}

TEST_CASE("no trees exist at order two") {
    auto p = e1_problem();
    CHECK(enumerate_all(Scheme::NonDegenerate, 2, p).empty());
}

TEST_CASE("the two order-three orderings at zero momentum") {
    const double eps = 0.05;
    auto p = e1_problem(eps);
    auto ts = enumerate(Scheme::NonDegenerate, 3, {0}, p);
    REQUIRE(ts.size() == 2);  // E(1)E(-1) and E(-1)E(1), sibling order distinct
    Coeff sum = 0.0;
    for (const auto& t : ts) {
        Coeff v = tree_value(t, p);
        CHECK(std::abs(v - Coeff(-eps * eps / 4, 0.0)) <= 1e-13 * (eps * eps / 4));
        sum += v;
    }
    CHECK(std::abs(sum - Coeff(-eps * eps / 2, 0.0)) <= 1e-13 * (eps * eps / 2));
    // Sibling order is invisible to the canonical encoding.
    CHECK(canonical_encoding(ts[0]) == canonical_encoding(ts[1]));
    CHECK(canonical_encoding(ts[0]).substr(0, 3) == "n1:");
    auto other = enumerate(Scheme::NonDegenerate, 3, {2}, p);
    REQUIRE(other.size() == 1);
    CHECK(canonical_encoding(other[0]) != canonical_encoding(ts[0]));

    auto text = dump(ts[0]);
    CHECK(text.find("tree order=3") != std::string::npos);
    CHECK(text.find("internal p=2") != std::string::npos);
    CHECK(text.find("end mode=") != std::string::npos);
}

TEST_CASE("mode reflection symmetry of the enumeration") {
    auto p = e1_problem();
    for (int k : {1, 3, 5})
        for (int m : {1, 2}) {
            auto plus = enumerate(Scheme::NonDegenerate, k, {m}, p);
            auto minus = enumerate(Scheme::NonDegenerate, k, {-m}, p);
            CHECK(plus.size() == minus.size());
        }
}

TEST_CASE("stored momenta are re-verified before evaluation") {
    auto p = e1_problem();
    auto ts = enumerate(Scheme::NonDegenerate, 3, {0}, p);
    REQUIRE_FALSE(ts.empty());
    Tree corrupt = ts[0];
    corrupt.root.momentum = {1};  // inconsistent with the leaves below
    CHECK_THROWS_AS(tree_value(corrupt, p), std::invalid_argument);
}

TEST_CASE("enumeration budget is enforced") {
    auto p = e1_problem();
    CHECK_THROWS_AS(enumerate_all(Scheme::NonDegenerate, 9, p, 10), qpr::SolverError);
}

TEST_CASE("scheme and nonlinearity must match") {
    CHECK_THROWS_AS(enumerate_all(Scheme::Degenerate, 1, e1_problem()), qpr::ConfigError);
    CHECK_THROWS_AS(enumerate_all(Scheme::NonDegenerate, 1, e3_problem()), qpr::ConfigError);
}

TEST_CASE("degenerate enumeration: gap below the zero order") {
    auto p = e3_problem();
    CHECK(enumerate_all(Scheme::Degenerate, 1, p).size() == 3);  // two modes plus the zeta end
    CHECK(enumerate_all(Scheme::Degenerate, 2, p).empty());
    CHECK(enumerate_all(Scheme::Degenerate, 3, p).empty());
    // Order 4: 3^3 ordered leaf triples minus the 7 with zero total momentum.
    CHECK(enumerate_all(Scheme::Degenerate, 4, p).size() == 20);
}

TEST_CASE("the repeated-momentum shape is never enumerated") {
    auto p = e3_problem();
    for (const Tree& t : enumerate_all(Scheme::Degenerate, 7, p)) {
        CHECK_FALSE(has_excluded_shape(t.root));
        CHECK(p.omega.dot(t.root.momentum) != 0.0);
    }
}

TEST_CASE("hand-built degenerate trees with zero internal momentum are rejected") {
    auto p = e3_problem();
    auto st = qpr::n3::solve(p, 2);
    Node e1{true, {1}, {}, {1}};
    Node em1{true, {-1}, {}, {-1}};
    Node ez{true, {0}, {}, {0}};
    Node root{false, {}, {e1, em1, ez}, {0}};
    Tree t{Scheme::Degenerate, 4, root};
    CHECK_THROWS_AS(tree_value(t, p, &st), std::invalid_argument);
    CHECK_THROWS_AS(tree_value(t, p, nullptr), std::invalid_argument);
}

TEST_CASE("tree sums reproduce the recursion coefficients") {
    auto p1 = e1_problem();
    auto sol1 = qpr::n1::solve(p1, 4);
    auto rep1 = oracle_compare(Scheme::NonDegenerate, 4, p1, sol1);
    CHECK(rep1.pass);
    CHECK(rep1.max_rel_error <= 1e-10);
    CHECK(rep1.trees_evaluated == 6);  // 2 at order 1, 4 at order 3

    auto p3 = e3_problem();
    auto st = qpr::n3::solve(p3, 4);
    auto sol3 = qpr::n3::assemble(p3, st);
    auto rep3 = oracle_compare(Scheme::Degenerate, 4, p3, sol3, &st);
    CHECK(rep3.pass);
    CHECK(rep3.trees_evaluated == 23);
}

TEST_CASE("structural counting bounds hold on every tree") {
    auto rep1 = check_lemmas(Scheme::NonDegenerate, 7, e1_problem());
    CHECK(rep1.pass);
    CHECK(rep1.violations == 0);
    CHECK(rep1.trees_checked == 102);     // 2 + 4 + 16 + 80 over the odd orders
    CHECK(rep1.equality_cases == 102);    // a pure p=2 tail makes every tree binary

    auto rep3 = check_lemmas(Scheme::Degenerate, 7, e3_problem());
    CHECK(rep3.pass);
    CHECK(rep3.violations == 0);
    CHECK(rep3.trees_checked > 23);
    CHECK(rep3.v0_nonempty_trees == 0);  // alpha = 1 leaves no room below alpha/2
}
