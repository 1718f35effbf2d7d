// gml_solve: command-line driver for the proximal method-of-lines solvers.
//
// Exit codes: 0 success, 2 invalid arguments, 3 solver failure or
// non-convergence, 4 I/O error.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gml/gml.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string mode = "cartesian";
    double epsilon = 0.1;
    double alpha = 1.0;
    double beta = 1.0;
    std::optional<double> K;
    std::size_t N = 100;
    std::optional<std::size_t> M;
    double tol = 1e-8;
    std::size_t max_iter = 5000;
    std::optional<std::size_t> iters;
    std::string source = "const:1";
    std::string scheme = "corrected";
    double a = 0.0;
    double b = 1.0;
    std::string y1 = "0";
    std::string y2 = "1";
    std::string out_field;
    std::string out_expr;
    std::string out_report;
};

template <typename Writer>
void write_file(const std::string& path, Writer&& writer) {
    if (path.empty()) return;
    std::ofstream os(path);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    writer(os);
    os.flush();
    if (!os) throw IoError("failed writing '" + path + "'");
}

gml::ProblemSpec make_problem(const RunConfig& cfg) {
    gml::ProblemSpec spec;
    spec.epsilon = cfg.epsilon;
    spec.alpha = cfg.alpha;
    spec.beta = cfg.beta;
    spec.prox_weight = cfg.K.value_or(50.0);
    spec.source = gml::parse_source(cfg.source);
    gml::CartesianDomain domain;
    domain.a = cfg.a;
    domain.b = cfg.b;
    auto lower = gml::parse_source(cfg.y1);
    auto upper = gml::parse_source(cfg.y2);
    domain.y1 = [lower](double x) { return lower(x, 0.0); };
    domain.y2 = [upper](double x) { return upper(x, 0.0); };
    spec.domain = domain;
    spec.validate();
    return spec;
}

double center_value(const gml::LineGrid& grid, const gml::FieldSolution& u) {
    return u(grid.n_lines / 2, grid.m_nodes / 2);
}

int run_cartesian(const RunConfig& cfg) {
    const auto spec = make_problem(cfg);
    const auto grid = gml::build_cartesian_grid(spec.cartesian(), cfg.N, cfg.M.value_or(cfg.N));
    gml::ProximalOptions options;
    options.tol = cfg.tol;
    options.max_iter = cfg.max_iter;
    options.fixed_iterations = cfg.iters;
    options.scheme = cfg.scheme == "lagged" ? gml::SweepScheme::lagged : gml::SweepScheme::defect_corrected;

    const auto report = gml::proximal_iterate(spec, grid, options);
    write_file(cfg.out_field, [&](std::ostream& os) { gml::write_field_csv(os, grid, report.solution); });
    write_file(cfg.out_report, [&](std::ostream& os) {
        auto j = gml::to_json(report);
        j["mode"] = "cartesian";
        j["center_value"] = center_value(grid, report.solution);
        os << j.dump(2) << '\n';
    });

    std::cout << std::setprecision(8) << "mode=cartesian iterations=" << report.outer_iterations
              << " converged=" << (report.converged ? "true" : "false") << " update=" << report.anchor_update_norm
              << " residual=" << report.residual_sup << " center=" << center_value(grid, report.solution) << '\n';
    const bool fixed_run = cfg.iters.has_value();
    return (report.converged || fixed_run) ? kExitOk : kExitSolver;
}

int run_polar(const RunConfig& cfg) {
    gml::PolarSymbolicConfig pc;
    pc.n_lines = cfg.N;
    pc.K = cfg.K.value_or(10.0);
    pc.epsilon = cfg.epsilon;
    pc.alpha = cfg.alpha;
    pc.beta = cfg.beta;
    pc.iters = cfg.iters.value_or(149);
    {
        const auto f = gml::parse_source(cfg.source);
        pc.source = f(0.0, 0.0);
    }
    const auto lines = gml::symbolic_solve(pc);

    write_file(cfg.out_expr, [&](std::ostream& os) { os << gml::lines_to_json(pc, lines).dump(2) << '\n'; });
    write_file(cfg.out_report, [&](std::ostream& os) {
        std::ostringstream table;
        gml::write_line_table(table, lines, std::max<std::size_t>(1, pc.n_lines / 10));
        nlohmann::json j{{"mode", "polar-symbolic"}, {"lines", pc.n_lines - 1}, {"iters", pc.iters},
                         {"table", table.str()}};
        os << j.dump(2) << '\n';
    });

    std::cout << std::setprecision(6) << "mode=polar-symbolic lines=" << pc.n_lines - 1 << " iters=" << pc.iters;
    const std::size_t stride = std::max<std::size_t>(1, pc.n_lines / 10);
    for (std::size_t n = stride; n < pc.n_lines; n += stride) {
        std::cout << " u[" << n << "]=" << lines[n].coeff({0, 0, 0, 0, 0});
    }
    std::cout << '\n';
    return kExitOk;
}

int run_oracle(const RunConfig& cfg) {
    const auto spec = make_problem(cfg);
    const auto grid = gml::build_cartesian_grid(spec.cartesian(), cfg.N, cfg.M.value_or(cfg.N));
    const auto result = gml::newton_solve(spec, grid, std::min(cfg.tol, 1e-10));
    write_file(cfg.out_field, [&](std::ostream& os) { gml::write_field_csv(os, grid, result.solution); });
    write_file(cfg.out_report, [&](std::ostream& os) {
        nlohmann::json j{{"mode", "oracle"},
                         {"newton_iterations", result.iterations},
                         {"residual_sup", result.residual},
                         {"step_norms", result.step_norms},
                         {"center_value", center_value(grid, result.solution)}};
        os << j.dump(2) << '\n';
    });
    std::cout << std::setprecision(8) << "mode=oracle newton_iterations=" << result.iterations
              << " residual=" << result.residual << " center=" << center_value(grid, result.solution) << '\n';
    return kExitOk;
}

int run_compare(const RunConfig& cfg) {
    const auto spec = make_problem(cfg);
    const auto grid = gml::build_cartesian_grid(spec.cartesian(), cfg.N, cfg.M.value_or(cfg.N));
    gml::ProximalOptions options;
    options.tol = cfg.tol;
    options.max_iter = cfg.max_iter;
    options.scheme = cfg.scheme == "lagged" ? gml::SweepScheme::lagged : gml::SweepScheme::defect_corrected;
    const auto report = gml::proximal_iterate(spec, grid, options);
    const auto oracle = gml::newton_solve(spec, grid, 1e-10);
    const auto cmp = gml::compare_fields(report.solution, oracle.solution);

    write_file(cfg.out_field, [&](std::ostream& os) { gml::write_field_csv(os, grid, report.solution); });
    write_file(cfg.out_report, [&](std::ostream& os) {
        nlohmann::json j{{"mode", "compare"},
                         {"sup_diff", cmp.sup_diff},
                         {"l2_diff", cmp.l2_diff},
                         {"gml", gml::to_json(report)},
                         {"oracle_residual", oracle.residual},
                         {"oracle_newton_iterations", oracle.iterations}};
        os << j.dump(2) << '\n';
    });
    std::cout << std::setprecision(8) << "mode=compare iterations=" << report.outer_iterations
              << " sup_diff=" << cmp.sup_diff << " l2_diff=" << cmp.l2_diff << '\n';
    return report.converged ? kExitOk : kExitSolver;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Proximal generalized method of lines for Ginzburg-Landau type equations"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* solve = app.add_subcommand("solve", "Run a solver and write its artifacts");
    solve->add_option("--mode", cfg.mode, "cartesian | polar-symbolic | oracle | compare")
        ->check(CLI::IsMember({"cartesian", "polar-symbolic", "oracle", "compare"}));
    solve->add_option("--eps", cfg.epsilon, "Diffusion coefficient epsilon")->check(CLI::PositiveNumber);
    solve->add_option("--alpha", cfg.alpha, "Cubic coefficient");
    solve->add_option("--beta", cfg.beta, "Linear coefficient");
    solve->add_option("--K", cfg.K, "Proximal weight (default 50 Cartesian, 10 polar)")
        ->check(CLI::NonNegativeNumber);
    solve->add_option("--N", cfg.N, "Number of line intervals")->check(CLI::Range(2, 1 << 20));
    solve->add_option("--M", cfg.M, "Transverse intervals per line (default N)")->check(CLI::Range(2, 1 << 20));
    solve->add_option("--tol", cfg.tol, "Sup-norm update tolerance")->check(CLI::PositiveNumber);
    solve->add_option("--max-iter", cfg.max_iter, "Outer iteration limit")->check(CLI::Range(1, 1 << 30));
    solve->add_option("--iters", cfg.iters, "Run exactly this many outer cycles")->check(CLI::Range(1, 1 << 30));
    solve->add_option("--f", cfg.source, "Source: const:<v> or an expression in x, y");
    solve->add_option("--scheme", cfg.scheme, "corrected | lagged")
        ->check(CLI::IsMember({"corrected", "lagged"}));
    solve->add_option("--a", cfg.a, "Left abscissa");
    solve->add_option("--b", cfg.b, "Right abscissa");
    solve->add_option("--y1", cfg.y1, "Lower boundary curve y1(x)");
    solve->add_option("--y2", cfg.y2, "Upper boundary curve y2(x)");
    solve->add_option("--out-field", cfg.out_field, "Field CSV path");
    solve->add_option("--out-expr", cfg.out_expr, "Line polynomial JSON path (polar-symbolic)");
    solve->add_option("--out-report", cfg.out_report, "Report JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (cfg.mode == "cartesian") return run_cartesian(cfg);
        if (cfg.mode == "polar-symbolic") return run_polar(cfg);
        if (cfg.mode == "oracle") return run_oracle(cfg);
        return run_compare(cfg);
    } catch (const IoError& e) {
        std::cerr << "gml_solve: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "gml_solve: " << e.what() << '\n';
        return kExitUsage;
    } catch (const gml::SolverError& e) {
        std::cerr << "gml_solve: " << e.what() << '\n';
        return kExitSolver;
    }
}
