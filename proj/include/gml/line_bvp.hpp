#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "gml/problem.hpp"
#include "gml/stencil.hpp"
#include "gml/sweep.hpp"

namespace gml {

/// Interior unknowns only: diag has length M-1, sub/sup length M-2.
/// Row j reads sub[j-1] u_{j-1} + diag[j] u_j + sup[j] u_{j+1} = rhs[j].
struct TridiagonalSystem {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> sup;
    std::vector<double> rhs;
};

/// Discretizes u - gamma u'' = rhs with gamma = b_n d^2 and zero ends:
/// (1 + 2 gamma/h^2) u_j - (gamma/h^2)(u_{j-1} + u_{j+1}) = rhs_j.
inline TridiagonalSystem assemble_line_system(double b_n, double d, double h, std::span<const double> rhs_values) {
    if (!(h > 0.0)) throw std::invalid_argument("assemble_line_system: h must be positive");
    if (!(b_n > 0.0)) throw std::invalid_argument("assemble_line_system: b_n must be positive");
    if (rhs_values.empty()) throw std::invalid_argument("assemble_line_system: no interior unknowns");

    const std::size_t m = rhs_values.size();
    const double off = b_n * d * d / (h * h);

    TridiagonalSystem sys;
    sys.diag.assign(m, 1.0 + 2.0 * off);
    sys.sub.assign(m - 1, -off);
    sys.sup.assign(m - 1, -off);
    sys.rhs.assign(rhs_values.begin(), rhs_values.end());
    return sys;
}

/// Thomas algorithm (no pivoting).
inline std::vector<double> thomas_solve(const TridiagonalSystem& sys) {
    const std::size_t m = sys.diag.size();
    if (m == 0 || sys.rhs.size() != m || sys.sub.size() + 1 != m || sys.sup.size() + 1 != m) {
        throw std::invalid_argument("thomas_solve: inconsistent system dimensions");
    }

    std::vector<double> sup_prime(m, 0.0);
    std::vector<double> x(m);

    double pivot = sys.diag[0];
    if (pivot == 0.0 || !std::isfinite(pivot)) throw SolverError("thomas_solve: zero pivot");
    if (m > 1) sup_prime[0] = sys.sup[0] / pivot;
    x[0] = sys.rhs[0] / pivot;

    for (std::size_t j = 1; j < m; ++j) {
        pivot = sys.diag[j] - sys.sub[j - 1] * sup_prime[j - 1];
        if (pivot == 0.0 || !std::isfinite(pivot)) throw SolverError("thomas_solve: zero pivot");
        if (j + 1 < m) sup_prime[j] = sys.sup[j] / pivot;
        x[j] = (sys.rhs[j] - sys.sub[j - 1] * x[j - 1]) / pivot;
    }
    for (std::size_t j = m - 1; j-- > 0;) {
        x[j] -= sup_prime[j] * x[j + 1];
    }
    return x;
}

/// Solves line n given the finished line n+1:
///   u_n - b_n d^2 u_n'' = a_n u_{n+1} + b_n reaction(u_{n+1}) d^2/eps + c_n
/// with u_n = 0 at both transverse ends. The cubic is lagged at line n+1.
/// Returns all M+1 nodal values.
inline std::vector<double> solve_line(std::size_t n, const SweepCoefficients& coeffs, std::span<const double> u_next,
                                      const ProblemSpec& spec, const LineGrid& grid) {
    if (n == 0 || n >= grid.n_lines) throw std::out_of_range("solve_line: line index must be interior");
    const std::size_t nodes = grid.m_nodes + 1;
    if (u_next.size() != nodes) throw std::invalid_argument("solve_line: u_next has the wrong length");

    const double scale = grid.d * grid.d / spec.epsilon;
    const double a_n = coeffs.a[n];
    const double b_n = coeffs.b[n];
    const auto c_n = coeffs.c.row(n);
    const auto e_n = coeffs.correction.row(n);

    std::vector<double> rhs(nodes - 2);
    for (std::size_t j = 1; j + 1 < nodes; ++j) {
        rhs[j - 1] = a_n * u_next[j] + b_n * reaction(u_next[j], spec.alpha, spec.beta) * scale + c_n[j] + e_n[j];
    }

    const auto interior = thomas_solve(assemble_line_system(b_n, grid.d, transverse_step(grid, n), rhs));
    std::vector<double> line(nodes, 0.0);
    std::copy(interior.begin(), interior.end(), line.begin() + 1);
    return line;
}

}  // namespace gml
