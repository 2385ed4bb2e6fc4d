#include "qpr/trees.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "qpr/errors.hpp"
#include "qpr/solver_n1.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qpr::trees {

namespace {

Mode zero_mode(int dim) { return Mode(static_cast<std::size_t>(dim), 0); }

Mode add_modes(const Mode& a, const Mode& b) {
    Mode out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

struct Ctx {
    Scheme scheme = Scheme::NonDegenerate;
    const Problem* prob = nullptr;
    int dim = 1;
    int min_branch = 2;
    std::vector<double> tail;       // admissible branchings: tail[p] != 0
    std::vector<Mode> end_modes;
    std::int64_t budget = kDefaultTreeBudget;
    std::int64_t produced = 0;
    std::vector<std::vector<Node>> memo;  // memo[k] = subtrees of order k

    void bump() {
        if (++produced > budget) throw SolverError("budget-exceeded: tree enumeration");
    }
};

Ctx make_ctx(Scheme scheme, const Problem& p, std::int64_t budget) {
    require_valid(p);
    if (scheme == Scheme::NonDegenerate && p.g.zero_order != 1)
        throw ConfigError("tree scheme mismatch: problem has a degenerate zero");
    if (scheme == Scheme::Degenerate && p.g.zero_order < 3)
        throw ConfigError("tree scheme mismatch: problem has a simple zero");

    Ctx c;
    c.scheme = scheme;
    c.prob = &p;
    c.dim = p.omega.dim();
    c.min_branch = scheme == Scheme::NonDegenerate ? 2 : p.g.zero_order;
    c.tail = shifted_g_tail(p.g);
    c.budget = budget;
    const Mode zero = zero_mode(c.dim);
    for (const auto& [nu, f] : p.forcing.terms())
        if (nu != zero) c.end_modes.push_back(nu);
    if (scheme == Scheme::Degenerate) c.end_modes.push_back(zero);  // the zeta end node
    c.memo.emplace_back();  // unused slot 0
    return c;
}

bool admissible_internal(const Ctx& c, const std::vector<Node>& children, const Mode& momentum) {
    if (c.scheme == Scheme::NonDegenerate) return true;
    // Internal exit lines must carry momentum in the degenerate scheme.
    if (momentum == zero_mode(c.dim)) return false;
    // Excluded shape: all children but one are end nodes and those end modes
    // cancel, so the internal child line would repeat the exit momentum.
    int internal_children = 0;
    Mode end_sum = zero_mode(c.dim);
    for (const Node& ch : children) {
        if (ch.is_end)
            end_sum = add_modes(end_sum, ch.mode);
        else
            ++internal_children;
    }
    return !(internal_children == 1 && end_sum == zero_mode(c.dim));
}

void ensure_order(Ctx& c, int k);

// Appends to `out` every internal node of order k and branching `parts`,
// extending `children` (orders already fixed summing with `remaining`).
void assign_children(Ctx& c, int remaining, int parts, std::vector<Node>& children,
                     std::vector<Node>& out) {
    if (parts == 1) {
        ensure_order(c, remaining);
        for (const Node& last : c.memo[static_cast<std::size_t>(remaining)]) {
            children.push_back(last);
            Mode momentum = zero_mode(c.dim);
            for (const Node& ch : children) momentum = add_modes(momentum, ch.momentum);
            if (admissible_internal(c, children, momentum)) {
                c.bump();
                out.push_back(Node{false, {}, children, momentum});
            }
            children.pop_back();
        }
        return;
    }
    for (int k1 = 1; remaining - k1 >= parts - 1; ++k1) {
        ensure_order(c, k1);
        for (const Node& ch : c.memo[static_cast<std::size_t>(k1)]) {
            children.push_back(ch);
            assign_children(c, remaining - k1, parts - 1, children, out);
            children.pop_back();
        }
    }
}

void ensure_order(Ctx& c, int k) {
    if (static_cast<int>(c.memo.size()) > k) return;
    ensure_order(c, k - 1);
    std::vector<Node> nodes;
    if (k == 1) {
        for (const Mode& m : c.end_modes) {
            c.bump();
            nodes.push_back(Node{true, m, {}, m});
        }
    } else {
        for (std::size_t p = static_cast<std::size_t>(c.min_branch); p < c.tail.size(); ++p) {
            if (c.tail[p] == 0.0) continue;
            if (static_cast<int>(p) > k - 1) continue;
            std::vector<Node> children;
            children.reserve(p);
            assign_children(c, k - 1, static_cast<int>(p), children, nodes);
        }
    }
    c.memo.push_back(std::move(nodes));
}

Tree to_tree(Scheme scheme, int k, const Node& n) { return Tree{scheme, k, n}; }

// Recomputes the momentum bottom-up; throws if it disagrees with the stored
// labels (post-hoc re-verification of the momentum rule).
Mode verify_momentum(const Node& n, int dim) {
    Mode m = zero_mode(dim);
    if (n.is_end) {
        m = n.mode;
    } else {
        for (const Node& ch : n.children) m = add_modes(m, verify_momentum(ch, dim));
    }
    if (m != n.momentum) throw std::invalid_argument("invalid-tree: stored momentum is inconsistent");
    return m;
}

std::complex<double> node_value(const Node& n, const Ctx& c, const n3::DegenerateState* st) {
    const Problem& p = *c.prob;
    const Mode zero = zero_mode(c.dim);
    const double s = p.omega.dot(n.momentum);
    std::complex<double> factor, line;

    if (n.is_end) {
        if (c.scheme == Scheme::Degenerate && n.mode == zero) {
            factor = p.epsilon * st->zeta;
            line = 1.0;
        } else {
            factor = p.epsilon * p.forcing.coeff(n.mode);
            if (n.mode == zero) throw std::invalid_argument("invalid-tree: zero end mode");
            line = c.scheme == Scheme::NonDegenerate
                       ? 1.0 / n1::propagator(p.epsilon, s, p.g.lead_coeff)
                       : n3::end_propagator(p.epsilon, s);
        }
        return factor * line;
    }

    const int pv = n.branching();
    if (pv < c.min_branch) throw std::invalid_argument("invalid-tree: branching below the scheme minimum");
    if (static_cast<std::size_t>(pv) >= c.tail.size() || c.tail[static_cast<std::size_t>(pv)] == 0.0)
        throw std::invalid_argument("invalid-tree: branching has no matching Taylor coefficient");

    if (c.scheme == Scheme::NonDegenerate) {
        // Degree label is forced: 1 on momentum-carrying lines, 0 otherwise.
        factor = n.momentum == zero ? -c.tail[static_cast<std::size_t>(pv)]
                                    : -p.epsilon * c.tail[static_cast<std::size_t>(pv)];
        line = n.momentum == zero
                   ? std::complex<double>{1.0 / p.g.lead_coeff, 0.0}
                   : 1.0 / n1::propagator(p.epsilon, s, p.g.lead_coeff);
        // factor already includes the epsilon of the d_v = 1 case
        std::complex<double> val = factor * line;
        for (const Node& ch : n.children) val *= node_value(ch, c, st);
        return val;
    }

    if (n.momentum == zero)
        throw std::invalid_argument("invalid-tree: internal exit line with zero momentum");
    factor = -p.epsilon * c.tail[static_cast<std::size_t>(pv)];
    line = n3::internal_propagator(p.epsilon, s, st->b, p.g.zero_order);
    std::complex<double> val = factor * line;
    for (const Node& ch : n.children) val *= node_value(ch, c, st);
    return val;
}

void encode(const Node& n, std::string& out) {
    if (n.is_end) {
        out += "E(";
        for (std::size_t i = 0; i < n.mode.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(n.mode[i]);
        }
        out += ')';
        return;
    }
    std::vector<std::string> parts;
    parts.reserve(n.children.size());
    for (const Node& ch : n.children) {
        std::string s;
        encode(ch, s);
        parts.push_back(std::move(s));
    }
    std::sort(parts.begin(), parts.end());
    out += "I[";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ';';
        out += parts[i];
    }
    out += ']';
}

void dump_node(const Node& n, int depth, std::ostringstream& os) {
    for (int i = 0; i < depth; ++i) os << "  ";
    if (n.is_end) {
        os << "end mode=(";
        for (std::size_t i = 0; i < n.mode.size(); ++i) os << (i ? "," : "") << n.mode[i];
    } else {
        os << "internal p=" << n.branching() << " momentum=(";
        for (std::size_t i = 0; i < n.momentum.size(); ++i) os << (i ? "," : "") << n.momentum[i];
    }
    os << ")\n";
    for (const Node& ch : n.children) dump_node(ch, depth + 1, os);
}

struct TreeStats {
    int ends = 0;
    int internals = 0;
    bool all_binary = true;
    int v0 = 0;  // internal nodes with a small-divisor exit line
};

void collect_stats(const Node& n, const Ctx& c, double half_alpha, TreeStats& st) {
    if (n.is_end) {
        ++st.ends;
        return;
    }
    ++st.internals;
    if (n.branching() != 2) st.all_binary = false;
    if (std::abs(c.prob->omega.dot(n.momentum)) < half_alpha) ++st.v0;
    for (const Node& ch : n.children) collect_stats(ch, c, half_alpha, st);
}

}  // namespace

int Tree::end_count() const {
    int n = 0;
    std::vector<const Node*> stack{&root};
    while (!stack.empty()) {
        const Node* cur = stack.back();
        stack.pop_back();
        if (cur->is_end) ++n;
        for (const Node& ch : cur->children) stack.push_back(&ch);
    }
    return n;
}

int Tree::internal_count() const { return order - end_count(); }

std::vector<Tree> enumerate(Scheme scheme, int k, const Mode& nu, const Problem& p,
                            std::int64_t budget) {
    std::vector<Tree> out;
    for (Tree& t : enumerate_all(scheme, k, p, budget))
        if (t.root.momentum == nu) out.push_back(std::move(t));
    return out;
}

std::vector<Tree> enumerate_all(Scheme scheme, int k, const Problem& p, std::int64_t budget) {
    if (k < 1) throw std::invalid_argument("enumerate: order must be >= 1");
    Ctx c = make_ctx(scheme, p, budget);
    ensure_order(c, k);
    std::vector<Tree> out;
    out.reserve(c.memo[static_cast<std::size_t>(k)].size());
    for (const Node& n : c.memo[static_cast<std::size_t>(k)]) out.push_back(to_tree(scheme, k, n));
    return out;
}

std::complex<double> tree_value(const Tree& t, const Problem& p, const n3::DegenerateState* state) {
    Ctx c = make_ctx(t.scheme, p, std::numeric_limits<std::int64_t>::max());
    if (t.scheme == Scheme::Degenerate && state == nullptr)
        throw std::invalid_argument("tree_value: the degenerate scheme needs the solved state");
    verify_momentum(t.root, c.dim);
    return node_value(t.root, c, state);
}

std::string canonical_encoding(const Tree& t) {
    std::string out = t.scheme == Scheme::NonDegenerate ? "n1:" : "deg:";
    encode(t.root, out);
    return out;
}

std::string dump(const Tree& t) {
    std::ostringstream os;
    os << "tree order=" << t.order << "\n";
    dump_node(t.root, 1, os);
    return os.str();
}

OracleReport oracle_compare(Scheme scheme, int k_max, const Problem& p, const SeriesSolution& sol,
                            const n3::DegenerateState* state, std::int64_t budget) {
    if (k_max > sol.K) throw std::invalid_argument("oracle_compare: solution truncated below k_max");
    Ctx c = make_ctx(scheme, p, budget);
    if (scheme == Scheme::Degenerate && state == nullptr)
        throw std::invalid_argument("oracle_compare: the degenerate scheme needs the solved state");

    OracleReport rep;
    rep.k_max = k_max;
    for (int k = 1; k <= k_max; ++k) {
        ensure_order(c, k);
        const auto& nodes = c.memo[static_cast<std::size_t>(k)];

        std::vector<std::complex<double>> values(nodes.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(nodes.size()); ++i)
            values[static_cast<std::size_t>(i)] =
                node_value(nodes[static_cast<std::size_t>(i)], c, state);
#else
        for (std::size_t i = 0; i < nodes.size(); ++i) values[i] = node_value(nodes[i], c, state);
#endif
        rep.trees_evaluated += static_cast<std::int64_t>(nodes.size());

        std::map<Mode, std::complex<double>> sums;
        for (std::size_t i = 0; i < nodes.size(); ++i) sums[nodes[i].momentum] += values[i];

        const FourierSeries& series = sol.order(k);
        std::map<Mode, std::pair<std::complex<double>, std::complex<double>>> both;
        for (const auto& [nu, v] : sums) both[nu].first = v;
        for (const auto& [nu, v] : series.terms()) both[nu].second = v;

        for (const auto& [nu, pair] : both) {
            double scale = std::max({std::abs(pair.first), std::abs(pair.second), 1e-30});
            double rel = std::abs(pair.first - pair.second) / scale;
            if (rel > rep.max_rel_error) {
                rep.max_rel_error = rel;
                rep.worst_k = k;
                rep.worst_nu = nu;
            }
        }
    }
    rep.pass = rep.max_rel_error <= 1e-10;
    return rep;
}

LemmaReport check_lemmas(Scheme scheme, int k_max, const Problem& p, std::int64_t budget) {
    Ctx c = make_ctx(scheme, p, budget);
    const int n = p.g.zero_order;
    const double half_alpha =
        scheme == Scheme::Degenerate ? 0.5 * n3::alpha_min(p) : 0.0;

    LemmaReport rep;
    rep.k_max = k_max;
    auto fail = [&](const Node& node, int k, const std::string& why) {
        ++rep.violations;
        if (rep.failures.size() < 5)
            rep.failures.push_back(why + "\n" + dump(to_tree(scheme, k, node)));
    };

    for (int k = 1; k <= k_max; ++k) {
        ensure_order(c, k);
        const auto& nodes = c.memo[static_cast<std::size_t>(k)];
        if (scheme == Scheme::Degenerate && k >= 2 && k <= n && !nodes.empty()) {
            fail(nodes.front(), k, "orders 2..n must have no trees at all");
        }
        for (const Node& node : nodes) {
            ++rep.trees_checked;
            verify_momentum(node, c.dim);
            TreeStats st;
            collect_stats(node, c, half_alpha, st);

            if (scheme == Scheme::NonDegenerate) {
                if (st.ends < st.internals + 1) fail(node, k, "end count below internal count + 1");
                if (2 * st.ends < k + 1) fail(node, k, "end count below (order + 1) / 2");
                bool equality = st.ends == st.internals + 1;
                if (st.internals > 0 && equality != st.all_binary)
                    fail(node, k, "equality case does not match the all-binary criterion");
                if (equality) {
                    ++rep.equality_cases;
                    if (k % 2 == 0) fail(node, k, "equality case with even order");
                }
            } else {
                if (st.ends < (n - 1) * st.internals + 1)
                    fail(node, k, "end count below (n-1) * internal count + 1");
                if (n * st.ends < (n - 1) * k + 1)
                    fail(node, k, "n * end count below (n-1) * order + 1");
                if (st.ends == (n - 1) * st.internals + 1) ++rep.equality_cases;
                if (st.internals > 0) {
                    if (st.v0 > 0) ++rep.v0_nonempty_trees;
                    if (n * st.v0 > st.ends - 2)
                        fail(node, k, "small-divisor internal nodes exceed (ends - 2) / n");
                }
            }
        }
    }
    rep.pass = rep.violations == 0;
    if (!rep.pass) {
        std::string msg = "lemma-violation: " + std::to_string(rep.violations) + " trees failed";
        for (const auto& f : rep.failures) msg += "\n" + f;
        throw VerificationError(msg);
    }
    return rep;
}

}  // namespace qpr::trees
