// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dense_solver.hpp"
#include "gml/gml.hpp"
#include "radial_oracle.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool ran = false;
    bool ok = false;
    std::string detail;
};

std::array<Outcome, 11> g_outcomes;

void report(int id, bool ok, const std::string& detail) { g_outcomes[id] = {true, ok, detail}; }

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

// Real root of u^3 - u - 1 = 0, ten scalar Newton steps from 1.5.
double cubic_root() {
    double u = 1.5;
    for (int k = 0; k < 10; ++k) u -= (u * u * u - u - 1.0) / (3.0 * u * u - 1.0);
    return u;
}

gml::ProblemSpec square(double eps, double K) {
    gml::ProblemSpec spec;
    spec.epsilon = eps;
    spec.prox_weight = K;
    spec.domain = gml::CartesianDomain::unit_square();
    return spec;
}

struct SquareRun {
    double eps = 0.0;
    double tol = 0.0;
    double K = 0.0;
    gml::LineGrid grid;
    gml::SolveReport report;
};

SquareRun run_square(double eps, std::size_t N, double K, double tol) {
    const auto spec = square(eps, K);
    SquareRun run{eps, tol, K, gml::build_cartesian_grid(spec.cartesian(), N, N), {}};
    gml::ProximalOptions options;
    options.tol = tol;
    run.report = gml::proximal_iterate(spec, run.grid, options);
    return run;
}

double center(const SquareRun& run) { return run.report.solution(run.grid.n_lines / 2, run.grid.m_nodes / 2); }

// Distance from y = 0 along the middle line where u first exceeds 90% of the
// center value.
double layer_width(const SquareRun& run) {
    const std::size_t n = run.grid.n_lines / 2;
    const double threshold = 0.9 * center(run);
    for (std::size_t j = 0; j <= run.grid.m_nodes; ++j) {
        if (run.report.solution(n, j) > threshold) return run.grid.y(n, j);
    }
    return 1.0;
}

void plateau_and_sweep(std::vector<SquareRun>& converged) {
    const double root = cubic_root();
    std::vector<SquareRun> runs;
    for (double eps : {0.1, 0.01, 0.001}) runs.push_back(run_square(eps, 100, 50.0, 1e-8));

    const SquareRun& fine = runs.back();
    const double c = center(fine);
    report(1, fine.report.converged && std::abs(c - root) <= 5e-3,
           fmt("u(0.5,0.5)=%.6f root=%.6f |diff|=%.2e iterations=%zu", c, root, std::abs(c - root),
               fine.report.outer_iterations));

    bool increasing = true;
    bool narrowing = true;
    std::string detail;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        if (k > 0) detail += "; ";
        detail += fmt("eps=%g center=%.5f width=%.3f", runs[k].eps, center(runs[k]), layer_width(runs[k]));
        if (!runs[k].report.converged) increasing = false;
        if (k > 0) {
            increasing = increasing && center(runs[k]) > center(runs[k - 1]) && center(runs[k]) < root + 5e-3;
            narrowing = narrowing && layer_width(runs[k]) < layer_width(runs[k - 1]);
        }
    }
    report(2, increasing && narrowing, detail);
    for (auto& r : runs) {
        if (r.report.converged) converged.push_back(std::move(r));
    }
}

void oracle_equivalence(std::vector<SquareRun>& converged) {
    SquareRun run = run_square(0.1, 20, 50.0, 1e-8);
    const auto oracle = gml::newton_solve(square(0.1, 50.0), run.grid);
    const auto cmp = gml::compare_fields(run.report.solution, oracle.solution);
    report(4, run.report.converged && cmp.sup_diff <= 1e-2 && cmp.l2_diff <= 5e-3,
           fmt("sup=%.3e l2=%.3e newton_iterations=%zu", cmp.sup_diff, cmp.l2_diff, oracle.iterations));
    if (run.report.converged) converged.push_back(std::move(run));
}

void proximal_consistency(std::vector<SquareRun> converged) {
    // A few more converged runs with other weights and tolerances.
    converged.push_back(run_square(0.05, 40, 10.0, 1e-9));
    converged.push_back(run_square(0.02, 30, 200.0, 1e-7));
    bool ok = true;
    double worst = 0.0;
    std::size_t checked = 0;
    for (const auto& run : converged) {
        if (!run.report.converged) {
            ok = false;
            continue;
        }
        ++checked;
        const double bound = run.K * run.tol + 1e-10;
        worst = std::max(worst, run.report.residual_sup / bound);
        ok = ok && run.report.residual_sup <= bound;
    }
    report(3, ok, fmt("%zu converged runs, max residual/(K tol + 1e-10)=%.3f", checked, worst));
}

void symbolic_reproduction(int id, double eps, const std::array<double, 9>& printed, double uf90) {
    gml::PolarSymbolicConfig cfg;
    cfg.epsilon = eps;
    const auto lines = gml::symbolic_solve(cfg);
    double worst = 0.0;
    for (std::size_t k = 0; k < printed.size(); ++k) {
        worst = std::max(worst, std::abs(lines[10 * (k + 1)].coeff({0, 0, 0, 0, 0}) - printed[k]));
    }
    const double got90 = lines[90].coeff({1, 0, 0, 0, 0});
    report(id, worst <= 2e-3 && std::abs(got90 - uf90) <= 5e-3,
           fmt("eps=%g max constant diff=%.2e line 90 u_f coeff=%.5f (expected %.4f)", eps, worst, got90, uf90));
}

void cross_validation() {
    gml::PolarSymbolicConfig cfg;
    cfg.epsilon = 0.1;
    const auto lines = gml::symbolic_solve(cfg);
    const auto zero = [](double) { return 0.0; };
    const auto samples = gml::sample_boundary(zero, zero, zero, 16, cfg.domain.theta_period);
    const auto cmp = gml::cross_check_numeric(cfg, lines, samples);
    // Extra context, not part of the criterion: distance to the centered
    // radial discretization.
    const auto radial = gml::testing::radial_newton(cfg);
    double gap = 0.0;
    for (std::size_t n = 1; n < cfg.n_lines; ++n) gap = std::max(gap, std::abs(lines[n].coeff({0, 0, 0, 0, 0}) - radial[n]));
    report(7, cmp.sup_diff <= 2e-2, fmt("sup=%.3e (radial ODE reference gap %.3f, informational)", cmp.sup_diff, gap));
}

gml::BoundaryPolynomial random_poly(std::mt19937_64& rng, const gml::TruncationSpec& trunc,
                                    const gml::Exponents& max_exp) {
    std::uniform_int_distribution<int> coeff(-4, 4);
    std::uniform_int_distribution<int> count(0, 5);
    gml::BoundaryPolynomial p(trunc);
    const int terms = count(rng);
    for (int t = 0; t < terms; ++t) {
        gml::Exponents e{};
        for (std::size_t v = 0; v < gml::kSymbolCount; ++v) e[v] = std::uniform_int_distribution<int>(0, max_exp[v])(rng);
        p.accumulate(e, coeff(rng));
    }
    return p;
}

void algebra_properties() {
    std::mt19937_64 rng(8080);
    int failures = 0;

    const gml::TruncationSpec caps{};
    for (int t = 0; t < 1000; ++t) {
        const auto p = random_poly(rng, caps, caps.caps);
        const auto q = random_poly(rng, caps, caps.caps);
        const auto r = random_poly(rng, caps, caps.caps);
        if (!(p * q == q * p) || !((p * q) * r == p * (q * r)) || !(p * (q + r) == p * q + p * r)) ++failures;
    }

    const gml::TruncationSpec wide{{8, 6, 6, 6, 6}};
    for (int t = 0; t < 500; ++t) {
        const auto p = random_poly(rng, wide, {3, 2, 2, 2, 2});
        const auto q = random_poly(rng, wide, {3, 2, 2, 2, 2});
        if (!(gml::poly_diff(p * q) == gml::poly_diff(p) * q + p * gml::poly_diff(q))) ++failures;
    }

    const gml::TruncationSpec eval_caps{{6, 2, 2, 0, 0}};
    std::uniform_real_distribution<double> value(-1.5, 1.5);
    for (int t = 0; t < 500; ++t) {
        const auto p = random_poly(rng, eval_caps, {3, 1, 1, 0, 0});
        const auto q = random_poly(rng, eval_caps, {3, 1, 1, 0, 0});
        const double x0 = value(rng), x1 = value(rng), x2 = value(rng);
        const double lhs = gml::poly_eval(p * q, x0, x1, x2);
        const double rhs = gml::poly_eval(p, x0, x1, x2) * gml::poly_eval(q, x0, x1, x2);
        if (std::abs(lhs - rhs) > 1e-12 * (1.0 + std::abs(rhs))) ++failures;
    }
    report(8, failures == 0, fmt("2000 randomized cases, %d failures", failures));
}

double sine_error(std::size_t M, double gamma) {
    const double h = 1.0 / static_cast<double>(M);
    std::vector<double> rhs(M - 1);
    for (std::size_t j = 1; j < M; ++j) rhs[j - 1] = (1.0 + gamma * kPi * kPi) * std::sin(kPi * j * h);
    const auto u = gml::thomas_solve(gml::assemble_line_system(gamma, 1.0, h, rhs));
    double err = 0.0;
    for (std::size_t j = 1; j < M; ++j) err = std::max(err, std::abs(u[j - 1] - std::sin(kPi * j * h)));
    return err;
}

void line_bvp_convergence() {
    std::vector<double> errors;
    for (std::size_t M : {25u, 50u, 100u, 200u}) errors.push_back(sine_error(M, 0.05));
    bool ok = true;
    std::string detail = "ratios";
    for (std::size_t k = 1; k < errors.size(); ++k) {
        const double ratio = errors[k - 1] / errors[k];
        detail += fmt(" %.3f", ratio);
        ok = ok && ratio >= 3.5 && ratio <= 4.5;
    }

    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_int_distribution<int> size(1, 60);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = static_cast<std::size_t>(size(rng));
        gml::TridiagonalSystem sys;
        sys.sub.resize(m - 1);
        sys.sup.resize(m - 1);
        sys.diag.resize(m);
        sys.rhs.resize(m);
        for (auto& v : sys.sub) v = coeff(rng);
        for (auto& v : sys.sup) v = coeff(rng);
        for (std::size_t j = 0; j < m; ++j) {
            const double off = (j > 0 ? std::abs(sys.sub[j - 1]) : 0.0) + (j + 1 < m ? std::abs(sys.sup[j]) : 0.0);
            sys.diag[j] = (coeff(rng) < 0 ? -1.0 : 1.0) * (off + 0.1 + std::abs(coeff(rng)));
            sys.rhs[j] = coeff(rng);
        }
        const auto x = gml::thomas_solve(sys);
        const auto ref = gml::testing::dense_solve(sys);
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            num = std::max(num, std::abs(x[j] - ref[j]));
            den = std::max(den, std::abs(ref[j]));
        }
        worst = std::max(worst, den > 0.0 ? num / den : num);
    }
    ok = ok && worst <= 1e-12;
    report(9, ok, detail + fmt("; thomas vs dense worst relative=%.2e", worst));
}

void sweep_properties() {
    std::mt19937_64 rng(555);
    std::uniform_real_distribution<double> logK(-1.0, 3.0);
    std::uniform_real_distribution<double> logeps(-3.0, 0.0);
    std::uniform_int_distribution<int> lines(3, 200);
    std::uniform_real_distribution<double> anchor(-2.0, 2.0);
    bool monotone = true;
    bool bounded = true;
    bool anchor_free = true;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t N = static_cast<std::size_t>(lines(rng));
        const auto grid = gml::build_cartesian_grid(gml::CartesianDomain::unit_square(), N, 6);
        const auto spec = square(std::pow(10.0, logeps(rng)), std::pow(10.0, logK(rng)));
        gml::IterateState zero{grid.make_field(), 0};
        gml::IterateState random{grid.make_field(), 0};
        for (std::size_t n = 1; n < N; ++n) {
            for (std::size_t j = 1; j < grid.m_nodes; ++j) random.anchor(n, j) = anchor(rng);
        }
        const auto c0 = gml::forward_sweep(spec, grid, zero);
        const auto c1 = gml::forward_sweep(spec, grid, random);
        anchor_free = anchor_free && c0.a == c1.a && c0.b == c1.b;

        const double q = 2.0 + spec.prox_weight * grid.d * grid.d / spec.epsilon;
        const double a_star = (q - std::sqrt(q * q - 4.0)) / 2.0;
        for (std::size_t n = 1; n < N; ++n) {
            bounded = bounded && c0.a[n] > 0.0 && c0.a[n] <= a_star * (1.0 + 1e-14);
            if (n + 1 < N) {
                // Equality is only allowed once a_n sits on the floating-point
                // fixed point of a -> 1/(q - a).
                const bool saturated = c0.a[n] == 1.0 / (q - c0.a[n]);
                monotone = monotone && (saturated ? c0.a[n + 1] == c0.a[n] : c0.a[n + 1] > c0.a[n]);
            }
        }
    }
    report(10, monotone && bounded && anchor_free,
           fmt("20 triples: monotone=%d bounded=%d anchor-independent=%d", monotone, bounded, anchor_free));
}

}  // namespace

int main() {
    std::vector<SquareRun> converged;
    plateau_and_sweep(converged);
    oracle_equivalence(converged);
    proximal_consistency(std::move(converged));
    symbolic_reproduction(5, 0.01, {1.0057, 1.2512, 1.3078, 1.3208, 1.3238, 1.32449, 1.32425, 1.31561, 1.14766}, 0.296);
    symbolic_reproduction(6, 0.1, {0.4780, 0.7919, 0.9823, 1.0888, 1.1316, 1.1104, 1.0050, 0.7838, 0.4359}, 0.9077);
    cross_validation();
    algebra_properties();
    line_bvp_convergence();
    sweep_properties();
    int failures = 0;
    for (int id = 1; id <= 10; ++id) {
        const auto& o = g_outcomes[id];
        const bool ok = o.ran && o.ok;
        std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL", o.ran ? o.detail.c_str() : "not run");
        if (!ok) ++failures;
    }
    std::printf("%s: %d failing criteria\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
    return failures == 0 ? 0 : 1;
}
