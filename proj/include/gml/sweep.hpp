#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "gml/problem.hpp"
#include "gml/stencil.hpp"

namespace gml {

/// How the line relation u_n = a_n u_{n+1} + b_n T_n + c_n treats the
/// elimination defect.
enum class SweepScheme {
    /// The defect is evaluated at the anchor and folded into c_n. At the
    /// outer fixed point the relation is the exact block elimination, so the
    /// converged field solves the unregularized finite-difference system.
    defect_corrected,
    /// The defect is dropped (the raw scheme). Converges to a nearby field
    /// whose finite-difference residual is O(d).
    lagged,
};

struct IterateState {
    FieldSolution anchor;   // (u_0)_n
    std::size_t iteration = 0;
};

/// a, b are indexed by line: entries 1..N-1 are meaningful, 0 and N are 0.
/// c and correction are (N+1) x (M+1), rows 1..N-1 meaningful.
struct SweepCoefficients {
    std::vector<double> a;
    std::vector<double> b;
    LineArray c;
    LineArray correction;
    SweepScheme scheme = SweepScheme::defect_corrected;
};

namespace detail {

inline void check_state(const LineGrid& grid, const IterateState& state) {
    if (state.anchor.lines() != grid.n_lines + 1 || state.anchor.nodes() != grid.m_nodes + 1) {
        throw std::invalid_argument("anchor dimensions do not match the grid");
    }
}

inline void fill_scalar_recursion(const ProblemSpec& spec, const LineGrid& grid, SweepCoefficients& coeffs) {
    const std::size_t n_lines = grid.n_lines;
    const double q = 2.0 + spec.prox_weight * grid.d * grid.d / spec.epsilon;
    coeffs.a.assign(n_lines + 1, 0.0);
    coeffs.b.assign(n_lines + 1, 0.0);

    double a_prev = 0.0;
    double b_prev = 0.0;
    for (std::size_t n = 1; n < n_lines; ++n) {
        const double denom = q - a_prev;
        if (!(denom > 0.0)) throw SolverError("forward sweep: non-positive recursion denominator");
        const double a_n = 1.0 / denom;
        const double b_n = (n == 1) ? a_n : a_n * (b_prev + 1.0);
        coeffs.a[n] = a_n;
        coeffs.b[n] = b_n;
        a_prev = a_n;
        b_prev = b_n;
    }
}

}  // namespace detail

/// Recomputes c (and the anchor-evaluated correction) for a new anchor,
/// reusing a and b, which depend only on (N, d, eps, K).
inline SweepCoefficients refresh_c(SweepCoefficients coeffs, const ProblemSpec& spec, const LineGrid& grid,
                                   const IterateState& state, const LineArray& source) {
    detail::check_state(grid, state);
    const std::size_t n_lines = grid.n_lines;
    const std::size_t nodes = grid.m_nodes + 1;
    if (coeffs.a.size() != n_lines + 1 || coeffs.b.size() != n_lines + 1) {
        throw std::invalid_argument("refresh_c: coefficient vectors do not match the grid");
    }
    if (source.lines() != n_lines + 1 || source.nodes() != nodes) {
        throw std::invalid_argument("refresh_c: sampled source does not match the grid");
    }

    const double scale = grid.d * grid.d / spec.epsilon;
    const double d2 = grid.d * grid.d;
    const double K = spec.prox_weight;
    const auto& u0 = state.anchor;

    coeffs.c = LineArray(n_lines + 1, nodes);
    coeffs.correction = LineArray(n_lines + 1, nodes);

    for (std::size_t n = 1; n < n_lines; ++n) {
        const double a_n = coeffs.a[n];
        for (std::size_t j = 0; j < nodes; ++j) {
            const double prev = (n == 1) ? 0.0 : coeffs.c(n - 1, j);
            coeffs.c(n, j) = a_n * (prev + (K * u0(n, j) + source(n, j)) * scale);
        }
    }

    if (coeffs.scheme == SweepScheme::defect_corrected) {
        // Exact elimination carries S_n = a_n (S_{n-1} + T(u_n)); the line
        // solve only sees b_n (reaction(u_{n+1}) d^2/eps + d^2 u_n''), so
        // the difference is supplied from the anchor.
        std::vector<double> accumulated(nodes, 0.0);
        std::vector<double> curvature(nodes, 0.0);
        for (std::size_t n = 1; n < n_lines; ++n) {
            const double a_n = coeffs.a[n];
            const double b_n = coeffs.b[n];
            second_difference(u0.row(n), transverse_step(grid, n), curvature);
            for (std::size_t j = 1; j + 1 < nodes; ++j) {
                const double bending = d2 * curvature[j];
                const double t_own = reaction(u0(n, j), spec.alpha, spec.beta) * scale + bending;
                const double t_lagged = reaction(u0(n + 1, j), spec.alpha, spec.beta) * scale + bending;
                accumulated[j] = a_n * (accumulated[j] + t_own);
                coeffs.correction(n, j) = accumulated[j] - b_n * t_lagged;
            }
        }
    }
    return coeffs;
}

inline SweepCoefficients refresh_c(SweepCoefficients coeffs, const ProblemSpec& spec, const LineGrid& grid,
                                   const IterateState& state) {
    return refresh_c(std::move(coeffs), spec, grid, state, sample_source(spec, grid));
}

/// a_1 = 1/(2 + K d^2/eps), b_1 = a_1, c_1 = a_1 (K u0_1 + f_1) d^2/eps, then
/// a_n = 1/(2 + K d^2/eps - a_{n-1}), b_n = a_n (b_{n-1} + 1),
/// c_n = a_n (c_{n-1} + (K u0_n + f_n) d^2/eps).
inline SweepCoefficients forward_sweep(const ProblemSpec& spec, const LineGrid& grid, const IterateState& state,
                                       SweepScheme scheme = SweepScheme::defect_corrected) {
    spec.validate();
    detail::check_state(grid, state);
    SweepCoefficients coeffs;
    coeffs.scheme = scheme;
    detail::fill_scalar_recursion(spec, grid, coeffs);
    return refresh_c(std::move(coeffs), spec, grid, state);
}

}  // namespace gml
