#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gml/polynomial.hpp"
#include "gml/problem.hpp"
#include "gml/stencil.hpp"

namespace gml {

/// Symbolic solve on the annulus: lines are circles r = t_n, the outer one
/// carries the boundary symbol u_f(theta).
struct PolarSymbolicConfig {
    std::size_t n_lines = 100;
    double K = 10.0;
    double epsilon = 0.01;
    double alpha = 1.0;
    double beta = 1.0;
    double source = 1.0;      // constant f
    std::size_t iters = 149;
    TruncationSpec trunc{};
    PolarDomain domain{};
    /// When set, stop early once no coefficient moves by more than this.
    std::optional<double> stop_tol;

    double d() const { return (domain.r_outer - domain.r_inner) / static_cast<double>(n_lines); }
    double radius(std::size_t n) const { return domain.r_inner + static_cast<double>(n) * d(); }

    void validate() const {
        domain.validate();
        if (n_lines < 2) throw std::invalid_argument("polar config needs at least 2 lines");
        if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
        if (!(K >= 0.0)) throw std::invalid_argument("K must be >= 0");
        if (iters < 1) throw std::invalid_argument("iters must be >= 1");
    }
};

using LinePolynomials = std::vector<BoundaryPolynomial>;  // index = line, 0..n_lines

struct SymbolicSweep {
    std::vector<double> a;   // 1..n_lines-1
    std::vector<double> b;
    LinePolynomials c;
};

inline SymbolicSweep symbolic_sweep(const PolarSymbolicConfig& cfg, const LinePolynomials& anchors) {
    if (anchors.size() != cfg.n_lines + 1) throw std::invalid_argument("symbolic_sweep: one anchor per line expected");
    const double d = cfg.d();
    const double scale = d * d / cfg.epsilon;
    const double q = 2.0 + cfg.K * scale;
    const auto forcing = BoundaryPolynomial::constant(cfg.source, cfg.trunc);

    SymbolicSweep out;
    out.a.assign(cfg.n_lines, 0.0);
    out.b.assign(cfg.n_lines, 0.0);
    out.c.assign(cfg.n_lines, BoundaryPolynomial(cfg.trunc));
    for (std::size_t i = 1; i < cfg.n_lines; ++i) {
        out.a[i] = 1.0 / (q - (i == 1 ? 0.0 : out.a[i - 1]));
        out.b[i] = (i == 1) ? out.a[i] : out.a[i] * (out.b[i - 1] + 1.0);
        auto drive = (cfg.K * anchors[i] + forcing) * scale;
        if (i > 1) drive += out.c[i - 1];
        out.c[i] = out.a[i] * drive;
    }
    return out;
}

/// Lines n_lines-1 down to 1:
///   u_n = a_n u_{n+1} + b_n (-alpha u_{n+1}^3 + beta u_{n+1}) d^2/eps + c_n
///       + b_n d^2 D^2 u_{n+1} / t_n^2 + b_n d (uo_{n+1} - uo_n) / t_n
/// with u at the outer line equal to the symbol u_f. The radial term uses the
/// previous-cycle anchors uo.
inline LinePolynomials symbolic_backward_pass(const PolarSymbolicConfig& cfg, const SymbolicSweep& sweep,
                                              const LinePolynomials& anchors) {
    if (anchors.size() != cfg.n_lines + 1) {
        throw std::invalid_argument("symbolic_backward_pass: one anchor per line expected");
    }
    const double d = cfg.d();
    const double scale = d * d / cfg.epsilon;

    LinePolynomials u(cfg.n_lines + 1, BoundaryPolynomial(cfg.trunc));
    u[cfg.n_lines] = BoundaryPolynomial::symbol(0, cfg.trunc);
    for (std::size_t n = cfg.n_lines - 1; n >= 1; --n) {
        const auto& above = u[n + 1];
        const double t = cfg.radius(n);
        const double a_n = sweep.a[n];
        const double b_n = sweep.b[n];

        const auto cube = above * above * above;
        auto line = a_n * above;
        line += (b_n * scale) * (cfg.beta * above - cfg.alpha * cube);
        line += sweep.c[n];
        line += (b_n * d * d / (t * t)) * poly_derivative(above, 2);
        line += (b_n * d / t) * (anchors[n + 1] - anchors[n]);
        u[n] = std::move(line);
    }
    return u;
}

inline LinePolynomials symbolic_cycle(const PolarSymbolicConfig& cfg, const LinePolynomials& anchors) {
    return symbolic_backward_pass(cfg, symbolic_sweep(cfg, anchors), anchors);
}

inline double max_coefficient_change(const LinePolynomials& lhs, const LinePolynomials& rhs) {
    double worst = 0.0;
    for (std::size_t n = 0; n < lhs.size(); ++n) {
        const auto diff = lhs[n] - rhs[n];
        for (const auto& [e, c] : diff.terms()) worst = std::max(worst, std::abs(c));
    }
    return worst;
}

/// Zero anchors, then cfg.iters cycles (or fewer with stop_tol), replacing
/// the anchors with the new lines after each cycle.
inline LinePolynomials symbolic_solve(const PolarSymbolicConfig& cfg) {
    cfg.validate();
    LinePolynomials anchors(cfg.n_lines + 1, BoundaryPolynomial(cfg.trunc));
    for (std::size_t k = 0; k < cfg.iters; ++k) {
        auto next = symbolic_cycle(cfg, anchors);
        const bool settled = cfg.stop_tol && max_coefficient_change(next, anchors) <= *cfg.stop_tol;
        anchors = std::move(next);
        if (settled) break;
    }
    return anchors;
}

/// The same recursion on sampled values: rows are lines 0..n_lines, columns
/// are n_theta periodic nodes theta_j = j * period / n_theta. The theta
/// second derivative is the periodic three-point difference.
inline LineArray numeric_polar_solve(const PolarSymbolicConfig& cfg, const std::vector<double>& boundary) {
    cfg.validate();
    const std::size_t n_theta = boundary.size();
    if (n_theta < 3) throw std::invalid_argument("numeric_polar_solve: need at least 3 theta nodes");

    const std::size_t lines = cfg.n_lines + 1;
    const double d = cfg.d();
    const double scale = d * d / cfg.epsilon;
    const double q = 2.0 + cfg.K * scale;
    const double h_theta = cfg.domain.theta_period / static_cast<double>(n_theta);
    const double inv_h2 = 1.0 / (h_theta * h_theta);

    std::vector<double> a(cfg.n_lines, 0.0);
    std::vector<double> b(cfg.n_lines, 0.0);
    for (std::size_t i = 1; i < cfg.n_lines; ++i) {
        a[i] = 1.0 / (q - (i == 1 ? 0.0 : a[i - 1]));
        b[i] = (i == 1) ? a[i] : a[i] * (b[i - 1] + 1.0);
    }

    LineArray anchor(lines, n_theta);
    LineArray c(lines, n_theta);
    for (std::size_t k = 0; k < cfg.iters; ++k) {
        for (std::size_t i = 1; i < cfg.n_lines; ++i) {
            for (std::size_t j = 0; j < n_theta; ++j) {
                const double prev = (i == 1) ? 0.0 : c(i - 1, j);
                c(i, j) = a[i] * (prev + (cfg.K * anchor(i, j) + cfg.source) * scale);
            }
        }

        LineArray u(lines, n_theta);
        std::copy(boundary.begin(), boundary.end(), u.row(cfg.n_lines).begin());
        for (std::size_t n = cfg.n_lines - 1; n >= 1; --n) {
            const double t = cfg.radius(n);
            for (std::size_t j = 0; j < n_theta; ++j) {
                const double v = u(n + 1, j);
                const double left = u(n + 1, (j + n_theta - 1) % n_theta);
                const double right = u(n + 1, (j + 1) % n_theta);
                const double curvature = (left - 2.0 * v + right) * inv_h2;
                u(n, j) = a[n] * v + b[n] * reaction(v, cfg.alpha, cfg.beta) * scale + c(n, j) +
                          b[n] * d * d * curvature / (t * t) + b[n] * d * (anchor(n + 1, j) - anchor(n, j)) / t;
            }
        }
        anchor = std::move(u);
    }
    return anchor;
}

/// u_f and its first two derivatives sampled on the periodic theta grid.
struct BoundarySamples {
    std::vector<double> theta;
    std::vector<double> uf;
    std::vector<double> uf1;
    std::vector<double> uf2;
};

inline BoundarySamples sample_boundary(const std::function<double(double)>& uf,
                                       const std::function<double(double)>& uf1,
                                       const std::function<double(double)>& uf2, std::size_t n_theta,
                                       double period) {
    BoundarySamples s;
    for (std::size_t j = 0; j < n_theta; ++j) {
        const double th = period * static_cast<double>(j) / static_cast<double>(n_theta);
        s.theta.push_back(th);
        s.uf.push_back(uf(th));
        s.uf1.push_back(uf1(th));
        s.uf2.push_back(uf2(th));
    }
    return s;
}

struct CrossCheckReport {
    double sup_diff = 0.0;
    std::vector<double> per_line_sup;   // index = line
    LineArray symbolic_values;          // line polynomials evaluated at the samples
    LineArray numeric_values;
};

/// Evaluates the symbolic lines at the sampled boundary data and compares
/// them with the numeric recursion driven by the same samples.
inline CrossCheckReport cross_check_numeric(const PolarSymbolicConfig& cfg, const LinePolynomials& lines,
                                            const BoundarySamples& samples) {
    if (lines.size() != cfg.n_lines + 1) throw std::invalid_argument("cross_check_numeric: wrong line count");
    const std::size_t n_theta = samples.uf.size();

    CrossCheckReport report;
    report.numeric_values = numeric_polar_solve(cfg, samples.uf);
    report.symbolic_values = LineArray(cfg.n_lines + 1, n_theta);
    report.per_line_sup.assign(cfg.n_lines + 1, 0.0);
    for (std::size_t n = 1; n < cfg.n_lines; ++n) {
        for (std::size_t j = 0; j < n_theta; ++j) {
            const double sym = poly_eval(lines[n], samples.uf[j], samples.uf1[j], samples.uf2[j]);
            report.symbolic_values(n, j) = sym;
            report.per_line_sup[n] = std::max(report.per_line_sup[n], std::abs(sym - report.numeric_values(n, j)));
        }
        report.sup_diff = std::max(report.sup_diff, report.per_line_sup[n]);
    }
    return report;
}

inline CrossCheckReport cross_check_numeric(const PolarSymbolicConfig& cfg, const BoundarySamples& samples) {
    return cross_check_numeric(cfg, symbolic_solve(cfg), samples);
}

}  // namespace gml
