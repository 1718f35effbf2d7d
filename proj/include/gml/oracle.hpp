#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "gml/problem.hpp"
#include "gml/proximal.hpp"

namespace gml {

struct NewtonResult {
    FieldSolution solution;
    std::size_t iterations = 0;
    double residual = 0.0;               // sup norm, same definition as residual_norm
    std::vector<double> step_norms;      // sup |delta u| per Newton step
    bool restarted = false;              // zero start failed, constant start used
};

namespace detail {

inline double l2(const LineArray& r) {
    double s = 0.0;
    for (double v : r.flat()) s += v * v;
    return std::sqrt(s);
}

inline double sup(const LineArray& r) {
    double s = 0.0;
    for (double v : r.flat()) s = std::max(s, std::abs(v));
    return s;
}

// Real root of alpha u^3 - beta u = f by scalar Newton from a large start.
inline double plateau_root(double alpha, double beta, double f) {
    double u = 2.0;
    for (int k = 0; k < 60; ++k) {
        const double g = alpha * u * u * u - beta * u - f;
        const double dg = 3.0 * alpha * u * u - beta;
        if (dg == 0.0) break;
        u -= g / dg;
    }
    return u;
}

inline NewtonResult damped_newton(const ProblemSpec& spec, const LineGrid& grid, FieldSolution u, double tol,
                                  std::size_t max_newton) {
    const std::size_t N = grid.n_lines;
    const std::size_t M = grid.m_nodes;
    const std::size_t cols = M - 1;
    const std::size_t unknowns = (N - 1) * cols;
    const auto index = [cols](std::size_t n, std::size_t j) { return static_cast<int>((n - 1) * cols + (j - 1)); };

    const LineArray source = sample_source(spec, grid);
    const double inv_d2 = 1.0 / (grid.d * grid.d);

    NewtonResult result;
    LineArray r = residual_field(spec, grid, u, source);
    double merit = l2(r);

    for (std::size_t it = 0; it < max_newton; ++it) {
        if (sup(r) <= tol) {
            result.iterations = it;
            result.residual = sup(r);
            result.solution = std::move(u);
            return result;
        }

        std::vector<Eigen::Triplet<double>> triplets;
        triplets.reserve(5 * unknowns);
        Eigen::VectorXd rhs(static_cast<Eigen::Index>(unknowns));
        for (std::size_t n = 1; n < N; ++n) {
            const double inv_h2 = 1.0 / std::pow(transverse_step(grid, n), 2);
            for (std::size_t j = 1; j < M; ++j) {
                const int row = index(n, j);
                const double v = u(n, j);
                const double diag =
                    spec.epsilon * (2.0 * inv_d2 + 2.0 * inv_h2) + 3.0 * spec.alpha * v * v - spec.beta;
                triplets.emplace_back(row, row, diag);
                if (n > 1) triplets.emplace_back(row, index(n - 1, j), -spec.epsilon * inv_d2);
                if (n + 1 < N) triplets.emplace_back(row, index(n + 1, j), -spec.epsilon * inv_d2);
                if (j > 1) triplets.emplace_back(row, index(n, j - 1), -spec.epsilon * inv_h2);
                if (j + 1 < M) triplets.emplace_back(row, index(n, j + 1), -spec.epsilon * inv_h2);
                rhs[row] = -r(n, j);
            }
        }
        Eigen::SparseMatrix<double> jac(static_cast<Eigen::Index>(unknowns), static_cast<Eigen::Index>(unknowns));
        jac.setFromTriplets(triplets.begin(), triplets.end());

        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(jac);
        if (lu.info() != Eigen::Success) throw SolverError("newton_solve: singular Jacobian");
        const Eigen::VectorXd step = lu.solve(rhs);
        if (lu.info() != Eigen::Success) throw SolverError("newton_solve: linear solve failed");

        // Halve the step until the residual 2-norm decreases.
        double lambda = 1.0;
        FieldSolution trial = u;
        LineArray trial_r;
        double trial_merit = 0.0;
        bool accepted = false;
        for (int halvings = 0; halvings < 40; ++halvings, lambda *= 0.5) {
            for (std::size_t n = 1; n < N; ++n) {
                for (std::size_t j = 1; j < M; ++j) trial(n, j) = u(n, j) + lambda * step[index(n, j)];
            }
            trial_r = residual_field(spec, grid, trial, source);
            trial_merit = l2(trial_r);
            if (std::isfinite(trial_merit) && trial_merit < merit) {
                accepted = true;
                break;
            }
        }
        if (!accepted) throw SolverError("newton_solve: line search failed");

        result.step_norms.push_back(lambda * step.cwiseAbs().maxCoeff());
        u = std::move(trial);
        r = std::move(trial_r);
        merit = trial_merit;
    }
    if (sup(r) <= tol) {
        result.iterations = max_newton;
        result.residual = sup(r);
        result.solution = std::move(u);
        return result;
    }
    throw SolverError("newton_solve: no convergence within the iteration limit");
}

}  // namespace detail

/// Damped Newton on the full unregularized finite-difference system, zero
/// start; if that fails, one retry from the constant plateau root of
/// alpha u^3 - beta u = f(center).
inline NewtonResult newton_solve(const ProblemSpec& spec, const LineGrid& grid, double tol = 1e-10,
                                 std::size_t max_newton = 100) {
    spec.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("newton_solve: tol must be positive");
    try {
        return detail::damped_newton(spec, grid, grid.make_field(), tol, max_newton);
    } catch (const SolverError&) {
        const std::size_t mid_n = grid.n_lines / 2;
        const std::size_t mid_j = grid.m_nodes / 2;
        const double f_mid = spec.source(grid.abscissae[mid_n], grid.y(mid_n, mid_j));
        const double start = detail::plateau_root(spec.alpha, spec.beta, f_mid);
        FieldSolution u = grid.make_field();
        for (std::size_t n = 1; n < grid.n_lines; ++n) {
            for (std::size_t j = 1; j < grid.m_nodes; ++j) u(n, j) = start;
        }
        auto result = detail::damped_newton(spec, grid, std::move(u), tol, max_newton);
        result.restarted = true;
        return result;
    }
}

struct FieldComparison {
    double sup_diff = 0.0;
    double l2_diff = 0.0;   // RMS over interior nodes
};

inline FieldComparison compare_fields(const FieldSolution& u1, const FieldSolution& u2) {
    if (!u1.same_shape(u2)) throw std::invalid_argument("compare_fields: grid mismatch");
    if (u1.lines() < 3 || u1.nodes() < 3) throw std::invalid_argument("compare_fields: no interior nodes");
    FieldComparison out;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t n = 1; n + 1 < u1.lines(); ++n) {
        for (std::size_t j = 1; j + 1 < u1.nodes(); ++j) {
            const double diff = std::abs(u1(n, j) - u2(n, j));
            out.sup_diff = std::max(out.sup_diff, diff);
            sum += diff * diff;
            ++count;
        }
    }
    out.l2_diff = std::sqrt(sum / static_cast<double>(count));
    return out;
}

}  // namespace gml
