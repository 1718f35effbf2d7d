#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "gml/line_bvp.hpp"
#include "gml/problem.hpp"
#include "gml/stencil.hpp"
#include "gml/sweep.hpp"

namespace gml {

struct SolveReport {
    FieldSolution solution;
    std::size_t outer_iterations = 0;
    double anchor_update_norm = 0.0;       // sup |u - u0| of the last cycle
    double residual_sup = 0.0;             // unregularized finite-difference residual
    std::vector<double> error_estimates;   // sup_j |E_n| per line, 0 at n = 0, N
    std::vector<double> update_history;    // anchor_update_norm of every cycle
    bool converged = false;
};

struct ProximalOptions {
    double tol = 1e-8;
    std::size_t max_iter = 5000;
    /// Run exactly this many cycles and ignore tol.
    std::optional<std::size_t> fixed_iterations;
    SweepScheme scheme = SweepScheme::defect_corrected;
};

/// Lines N-1 down to 1, each from the one above it. Row N is set to
/// `u_boundary_n`, row 0 stays zero.
inline FieldSolution backward_pass(const SweepCoefficients& coeffs, const ProblemSpec& spec, const LineGrid& grid,
                                   std::span<const double> u_boundary_n) {
    if (u_boundary_n.size() != grid.m_nodes + 1) {
        throw std::invalid_argument("backward_pass: boundary data has the wrong length");
    }
    FieldSolution u = grid.make_field();
    std::copy(u_boundary_n.begin(), u_boundary_n.end(), u.row(grid.n_lines).begin());
    for (std::size_t n = grid.n_lines - 1; n >= 1; --n) {
        const auto line = solve_line(n, coeffs, u.row(n + 1), spec, grid);
        std::copy(line.begin(), line.end(), u.row(n).begin());
    }
    return u;
}

/// Pointwise residual of -eps (D_xx u + D_yy u) + alpha u^3 - beta u - f at
/// the interior nodes (zero elsewhere). The x difference pairs nodes with the
/// same reference parameter on neighbouring lines; D_yy uses h_n.
inline LineArray residual_field(const ProblemSpec& spec, const LineGrid& grid, const FieldSolution& u,
                                const LineArray& source) {
    if (u.lines() != grid.n_lines + 1 || u.nodes() != grid.m_nodes + 1) {
        throw std::invalid_argument("residual: field does not match the grid");
    }
    LineArray r(u.lines(), u.nodes());
    const double inv_d2 = 1.0 / (grid.d * grid.d);
    std::vector<double> curvature(u.nodes());
    for (std::size_t n = 1; n < grid.n_lines; ++n) {
        second_difference(u.row(n), transverse_step(grid, n), curvature);
        for (std::size_t j = 1; j < grid.m_nodes; ++j) {
            const double v = u(n, j);
            const double dxx = (u(n + 1, j) - 2.0 * v + u(n - 1, j)) * inv_d2;
            r(n, j) = -spec.epsilon * (dxx + curvature[j]) - reaction(v, spec.alpha, spec.beta) - source(n, j);
        }
    }
    return r;
}

inline double residual_norm(const ProblemSpec& spec, const LineGrid& grid, const FieldSolution& u) {
    const auto r = residual_field(spec, grid, u, sample_source(spec, grid));
    double worst = 0.0;
    for (double v : r.flat()) worst = std::max(worst, std::abs(v));
    return worst;
}

/// A-posteriori E_n = a_n E_{n-1} + b_n (T(u_n) - T(u_{n+1})), E_0 = 0, with
/// T(v) = reaction(v) d^2/eps + d^2 v''. Returns sup_j |E_n| for each line.
inline std::vector<double> error_estimate(const SweepCoefficients& coeffs, const FieldSolution& u,
                                          const ProblemSpec& spec, const LineGrid& grid) {
    const std::size_t nodes = grid.m_nodes + 1;
    const double d2 = grid.d * grid.d;
    const double scale = d2 / spec.epsilon;

    auto transfer = [&](std::size_t n, std::vector<double>& out) {
        std::vector<double> curvature(nodes);
        second_difference(u.row(n), transverse_step(grid, n), curvature);
        for (std::size_t j = 0; j < nodes; ++j) {
            out[j] = reaction(u(n, j), spec.alpha, spec.beta) * scale + d2 * curvature[j];
        }
    };

    std::vector<double> sup_error(grid.n_lines + 1, 0.0);
    std::vector<double> err(nodes, 0.0);
    std::vector<double> t_here(nodes);
    std::vector<double> t_next(nodes);
    transfer(1, t_here);
    for (std::size_t n = 1; n < grid.n_lines; ++n) {
        transfer(n + 1, t_next);
        double worst = 0.0;
        for (std::size_t j = 0; j < nodes; ++j) {
            err[j] = coeffs.a[n] * err[j] + coeffs.b[n] * (t_here[j] - t_next[j]);
            worst = std::max(worst, std::abs(err[j]));
        }
        sup_error[n] = worst;
        std::swap(t_here, t_next);
    }
    return sup_error;
}

/// Outer loop: sweep, backward pass, replace the anchor, until the sup-norm
/// update drops to tol. Starts from a zero anchor.
inline SolveReport proximal_iterate(const ProblemSpec& spec, const LineGrid& grid, const ProximalOptions& options = {}) {
    spec.validate();
    if (!options.fixed_iterations && !(options.tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (options.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");

    const LineArray source = sample_source(spec, grid);
    const std::vector<double> boundary(grid.m_nodes + 1, 0.0);
    const std::size_t limit = options.fixed_iterations.value_or(options.max_iter);

    IterateState state{grid.make_field(), 0};
    SweepCoefficients coeffs;
    coeffs.scheme = options.scheme;
    detail::fill_scalar_recursion(spec, grid, coeffs);

    SolveReport report;
    for (std::size_t k = 0; k < limit; ++k) {
        coeffs = refresh_c(std::move(coeffs), spec, grid, state, source);
        FieldSolution next = backward_pass(coeffs, spec, grid, boundary);
        const double update = sup_difference(next, state.anchor);
        if (!std::isfinite(update)) throw SolverError("proximal iteration diverged");

        state.anchor = std::move(next);
        state.iteration = k + 1;
        report.update_history.push_back(update);
        report.anchor_update_norm = update;
        if (!options.fixed_iterations && update <= options.tol) {
            report.converged = true;
            break;
        }
    }
    if (options.fixed_iterations) report.converged = report.anchor_update_norm <= options.tol;

    report.outer_iterations = state.iteration;
    {
        const auto r = residual_field(spec, grid, state.anchor, source);
        for (double v : r.flat()) report.residual_sup = std::max(report.residual_sup, std::abs(v));
    }
    report.error_estimates = error_estimate(coeffs, state.anchor, spec, grid);
    report.solution = std::move(state.anchor);
    return report;
}

}  // namespace gml
