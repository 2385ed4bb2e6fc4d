#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <qpr/config_io.hpp>
#include <qpr/errors.hpp>
#include <qpr/frequency.hpp>
#include <qpr/solver_n3.hpp>
#include <qpr/trees.hpp>
#include <qpr/verify.hpp>

namespace fs = std::filesystem;

namespace {

struct CliArgs {
    std::string config_path;
    std::string out_dir = ".";
    int order = 0;          // 0 = take the config value
    std::int64_t budget = 0;
    std::string eps_list;
};

qpr::Config load(const CliArgs& args) {
    auto cfg = qpr::load_config(args.config_path);
    if (args.order > 0) {
        cfg.solve.order = args.order;
        cfg.oracle.k_max = args.order;
    }
    if (args.budget > 0) {
        cfg.diagnose.budget = args.budget;
        cfg.oracle.tree_budget = args.budget;
    }
    if (!args.eps_list.empty()) {
        cfg.sweep.eps.clear();
        std::istringstream in(args.eps_list);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            try {
                cfg.sweep.eps.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw qpr::ConfigError("bad --eps-list entry: " + tok);
            }
        }
    }
    return cfg;
}

fs::path out_file(const CliArgs& args, const std::string& name) {
    fs::create_directories(args.out_dir);
    return fs::path(args.out_dir) / name;
}

bool degenerate(const qpr::Problem& p) {
    return qpr::validate(p).solver == qpr::SolverKind::Degenerate;
}

// Solves with whichever scheme the nonlinearity selects; for the degenerate
// scheme the state (zeta, b, ...) is also returned for reporting.
qpr::SeriesSolution solve_any(const qpr::Problem& p, int K, qpr::n3::DegenerateState* state_out) {
    if (degenerate(p)) {
        auto st = qpr::n3::solve(p, K);
        auto sol = qpr::n3::assemble(p, st);
        if (state_out) *state_out = std::move(st);
        return sol;
    }
    return qpr::n1::solve(p, K);
}

std::string coefficients_text(const qpr::SeriesSolution& sol) {
    std::string out = "# k nu re im\n";
    for (std::size_t i = 0; i < sol.orders.size(); ++i)
        for (const auto& [nu, c] : sol.orders[i].terms()) {
            out += std::to_string(i + 1);
            out += ' ';
            out += qpr::fmt_mode(nu);
            out += ' ';
            out += qpr::fmt(c);
            out += '\n';
        }
    return out;
}

std::string scalars_text(const qpr::Problem& p, const qpr::SeriesSolution& sol,
                         const qpr::n3::DegenerateState* st) {
    std::string out;
    out += "scheme " + std::string(st ? "degenerate" : "nondegenerate") + "\n";
    out += "epsilon " + qpr::fmt(sol.epsilon) + "\n";
    out += "c0 " + qpr::fmt(sol.c0) + "\n";
    out += "K " + std::to_string(sol.K) + "\n";
    out += "mu_radius_estimate " + qpr::fmt(sol.mu_radius_estimate) + "\n";
    out += "radius_warning " + std::string(sol.radius_warning ? "1" : "0") + "\n";
    out += "zero_order " + std::to_string(p.g.zero_order) + "\n";
    if (st) {
        out += "zeta " + qpr::fmt(st->zeta) + "\n";
        out += "b " + qpr::fmt(st->b) + "\n";
        out += "b0 " + qpr::fmt(st->b0) + "\n";
        out += "sign_b " + std::string(st->b > 0 ? "+1" : "-1") + "\n";
        out += "alpha_min " + qpr::fmt(st->alpha) + "\n";
        out += "f2_residual " + qpr::fmt(st->f2_residual) + "\n";
        out += "fbar_derivative_gap " + qpr::fmt(st->fbar_derivative_gap) + "\n";
        out += "outer_iterations " + std::to_string(st->outer_iterations) + "\n";
    }
    return out;
}

std::string residual_text(const qpr::ResidualReport& rep) {
    std::string out;
    out += "grid_size " + std::to_string(rep.grid_size) + "\n";
    out += "sup_residual " + qpr::fmt(rep.sup_residual) + "\n";
    out += "coeff_l1 " + qpr::fmt(rep.coeff_l1) + "\n";
    out += "# per-mode residual: nu re im\n";
    out += qpr::serialize_series(rep.per_mode_residual);
    return out;
}

int cmd_diagnose(const CliArgs& args) {
    auto cfg = load(args);
    qpr::validate(cfg.problem.omega);
    std::vector<qpr::Mode> support;
    for (const auto& [nu, c] : cfg.problem.forcing.terms()) support.push_back(nu);
    auto rep = qpr::diagnose(cfg.problem.omega, support, cfg.diagnose.n_max, cfg.diagnose.budget);
    std::string text = qpr::format_report(rep);
    qpr::write_text_atomic(out_file(args, "diagnose.txt"), text);
    std::cout << text;
    return 0;
}

int cmd_solve(const CliArgs& args) {
    auto cfg = load(args);
    qpr::require_valid(cfg.problem);
    qpr::n3::DegenerateState st;
    const bool deg = degenerate(cfg.problem);
    auto sol = solve_any(cfg.problem, cfg.solve.order, &st);
    auto res = qpr::residual(cfg.problem, sol, cfg.solve.grid);

    qpr::write_text_atomic(out_file(args, "coefficients.txt"), coefficients_text(sol));
    qpr::write_text_atomic(out_file(args, "scalars.txt"),
                           scalars_text(cfg.problem, sol, deg ? &st : nullptr));
    qpr::write_text_atomic(out_file(args, "residual.txt"), residual_text(res));
    std::cout << "K " << sol.K << " sup_residual " << qpr::fmt(res.sup_residual) << "\n";
    return 0;
}

int cmd_oracle(const CliArgs& args) {
    auto cfg = load(args);
    qpr::require_valid(cfg.problem);
    const bool deg = degenerate(cfg.problem);
    const auto scheme = deg ? qpr::trees::Scheme::Degenerate : qpr::trees::Scheme::NonDegenerate;
    qpr::n3::DegenerateState st;
    auto sol = solve_any(cfg.problem, cfg.oracle.k_max, &st);
    auto rep = qpr::trees::oracle_compare(scheme, cfg.oracle.k_max, cfg.problem, sol,
                                          deg ? &st : nullptr, cfg.oracle.tree_budget);
    auto lemmas = qpr::trees::check_lemmas(scheme, cfg.oracle.k_max, cfg.problem,
                                           cfg.oracle.tree_budget);

    std::string out;
    out += "pass " + std::string(rep.pass && lemmas.pass ? "1" : "0") + "\n";
    out += "k_max " + std::to_string(rep.k_max) + "\n";
    out += "max_rel_error " + qpr::fmt(rep.max_rel_error) + "\n";
    out += "worst_k " + std::to_string(rep.worst_k) + "\n";
    out += "worst_nu " + (rep.worst_nu.empty() ? "-" : qpr::fmt_mode(rep.worst_nu)) + "\n";
    out += "trees_evaluated " + std::to_string(rep.trees_evaluated) + "\n";
    out += "lemma_trees_checked " + std::to_string(lemmas.trees_checked) + "\n";
    out += "lemma_violations " + std::to_string(lemmas.violations) + "\n";
    out += "lemma_equality_cases " + std::to_string(lemmas.equality_cases) + "\n";
    qpr::write_text_atomic(out_file(args, "oracle.txt"), out);
    std::cout << out;
    if (!rep.pass)
        throw qpr::VerificationError("oracle mismatch: max relative error " +
                                     qpr::fmt(rep.max_rel_error));
    return 0;
}

int cmd_attract(const CliArgs& args) {
    auto cfg = load(args);
    qpr::require_valid(cfg.problem);
    auto sol = solve_any(cfg.problem, cfg.solve.order, nullptr);
    auto rep = qpr::attractor_test(cfg.problem, sol, cfg.attract.offsets, cfg.attract.t_end,
                                   cfg.attract.threshold, cfg.attract.dt);

    std::string out;
    out += "pass " + std::string(rep.pass ? "1" : "0") + "\n";
    out += "exploratory " + std::string(rep.exploratory ? "1" : "0") + "\n";
    out += "t_end " + qpr::fmt(rep.t_end) + "\n";
    out += "threshold " + qpr::fmt(rep.threshold) + "\n";
    out += "# offset final_distance fitted_rate converged\n";
    for (const auto& r : rep.offsets)
        out += qpr::fmt(r.offset) + " " + qpr::fmt(r.final_distance) + " " + qpr::fmt(r.fitted_rate) +
               " " + std::string(r.converged ? "1" : "0") + "\n";
    qpr::write_text_atomic(out_file(args, "attract.txt"), out);
    std::cout << out;

    // Re-run each offset serially for the CSV dumps (the report above may
    // have integrated them in parallel).
    const qpr::FourierSeries u = sol.total();
    std::vector<double> psi0(static_cast<std::size_t>(cfg.problem.omega.dim()), 0.0);
    const double x0 = sol.c0 + u.evaluate(psi0).real();
    const double v0 =
        qpr::directional_derivative(u, cfg.problem.omega.omega, 1).evaluate(psi0).real();
    for (std::size_t i = 0; i < cfg.attract.offsets.size(); ++i) {
        auto rec = qpr::integrate(cfg.problem, sol, x0 + cfg.attract.offsets[i], v0,
                                  cfg.attract.t_end, cfg.attract.dt);
        std::string csv = "t,x,v,distance\n";
        for (std::size_t j = 0; j < rec.t.size(); ++j)
            csv += qpr::fmt(rec.t[j]) + "," + qpr::fmt(rec.x[j]) + "," + qpr::fmt(rec.v[j]) + "," +
                   qpr::fmt(rec.distance[j]) + "\n";
        qpr::write_text_atomic(out_file(args, "trajectory_" + std::to_string(i) + ".csv"), csv);
    }

    if (!rep.pass)
        throw qpr::VerificationError("attractivity check failed: some offset did not return to the "
                                     "constructed solution");
    return 0;
}

int cmd_sweep(const CliArgs& args) {
    auto cfg = load(args);
    qpr::require_valid(cfg.problem);
    if (cfg.sweep.eps.empty())
        throw qpr::ConfigError("residual-sweep needs a nonempty eps list (config sweep.eps or --eps-list)");
    if (cfg.sweep.orders.empty()) throw qpr::ConfigError("sweep.orders must be nonempty");

    std::string csv = "epsilon,K,sup_residual\n";
    for (double eps : cfg.sweep.eps) {
        qpr::Problem p = cfg.problem;
        p.epsilon = eps;
        for (int K : cfg.sweep.orders) {
            auto sol = solve_any(p, K, nullptr);
            auto res = qpr::residual(p, sol, cfg.solve.grid);
            csv += qpr::fmt(eps) + "," + std::to_string(K) + "," + qpr::fmt(res.sup_residual) + "\n";
        }
    }
    qpr::write_text_atomic(out_file(args, "sweep.csv"), csv);
    std::cout << csv;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasi-periodic response construction for strongly damped forced oscillators"};
    app.require_subcommand(1);

    CliArgs args;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", args.config_path, "problem config file (JSON)")->required();
        sub->add_option("--out", args.out_dir, "output directory (default .)");
        sub->add_option("--order", args.order, "series truncation order (overrides the config)");
        sub->add_option("--budget", args.budget, "enumeration budget (overrides the config)");
        sub->add_option("--eps-list", args.eps_list, "comma-separated epsilon values for sweeps");
        return sub;
    };

    auto* diagnose = add_common(app.add_subcommand(
        "diagnose", "frequency vector diagnostics: alpha_n, beta_n, Bryuno partial sums"));
    auto* solve = add_common(app.add_subcommand(
        "solve", "construct the response series and report coefficients and residuals"));
    auto* oracle = add_common(app.add_subcommand(
        "oracle", "re-derive the coefficients as tree sums and check the counting bounds"));
    auto* attract = add_common(app.add_subcommand(
        "attract", "integrate perturbed initial conditions and test return to the response"));
    auto* sweep = add_common(app.add_subcommand(
        "residual-sweep", "sup residual over an epsilon list and order list, as CSV"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (diagnose->parsed()) return cmd_diagnose(args);
        if (solve->parsed()) return cmd_solve(args);
        if (oracle->parsed()) return cmd_oracle(args);
        if (attract->parsed()) return cmd_attract(args);
        if (sweep->parsed()) return cmd_sweep(args);
        std::cerr << "error: no command\n";
        return 2;
    } catch (const qpr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qpr::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const qpr::VerificationError& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
