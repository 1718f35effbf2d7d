#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gml {

/// Raised when an iterative or direct solve cannot proceed (zero pivot,
/// non-positive recursion denominator, Newton divergence).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Curve = std::function<double(double)>;
using Source = std::function<double(double, double)>;

/// Strip y1(x) <= y <= y2(x), a <= x <= b.
struct CartesianDomain {
    double a = 0.0;
    double b = 1.0;
    Curve y1 = [](double) { return 0.0; };
    Curve y2 = [](double) { return 1.0; };

    static CartesianDomain unit_square() { return {}; }
};

/// Annulus r_inner <= r <= r_outer, theta periodic. u = 0 on the inner
/// circle, u = u_f(theta) on the outer one.
struct PolarDomain {
    double r_inner = 1.0;
    double r_outer = 2.0;
    double theta_period = 2.0 * std::numbers::pi;

    void validate() const {
        if (!(r_inner > 0.0) || !(r_outer > r_inner)) {
            throw std::invalid_argument("PolarDomain requires r_outer > r_inner > 0");
        }
        if (!(theta_period > 0.0)) {
            throw std::invalid_argument("PolarDomain requires a positive theta period");
        }
    }
};

/// -eps * lap(u) + alpha u^3 - beta u = f, u = 0 on the boundary, with
/// proximal weight K.
struct ProblemSpec {
    double epsilon = 0.1;
    double alpha = 1.0;
    double beta = 1.0;
    Source source = [](double, double) { return 1.0; };
    double prox_weight = 50.0;
    std::variant<CartesianDomain, PolarDomain> domain = CartesianDomain{};

    void validate() const {
        if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
        if (!(prox_weight >= 0.0)) throw std::invalid_argument("proximal weight K must be >= 0");
        if (!source) throw std::invalid_argument("source term is empty");
        if (const auto* p = std::get_if<PolarDomain>(&domain)) p->validate();
    }

    const CartesianDomain& cartesian() const {
        const auto* c = std::get_if<CartesianDomain>(&domain);
        if (c == nullptr) throw std::invalid_argument("problem is not posed on a Cartesian domain");
        return *c;
    }
};

/// Row-major (lines x nodes) array of doubles. Row n holds line n sampled at
/// the reference nodes s_j; it is used for fields and for per-line
/// coefficient vectors alike.
class LineArray {
public:
    LineArray() = default;
    LineArray(std::size_t lines, std::size_t nodes, double fill = 0.0)
        : lines_(lines), nodes_(nodes), data_(lines * nodes, fill) {}

    std::size_t lines() const noexcept { return lines_; }
    std::size_t nodes() const noexcept { return nodes_; }

    double& operator()(std::size_t n, std::size_t j) { return data_[n * nodes_ + j]; }
    double operator()(std::size_t n, std::size_t j) const { return data_[n * nodes_ + j]; }

    std::span<double> row(std::size_t n) { return {data_.data() + n * nodes_, nodes_}; }
    std::span<const double> row(std::size_t n) const { return {data_.data() + n * nodes_, nodes_}; }

    std::span<const double> flat() const noexcept { return data_; }
    std::span<double> flat() noexcept { return data_; }

    bool same_shape(const LineArray& other) const noexcept {
        return lines_ == other.lines_ && nodes_ == other.nodes_;
    }

    friend bool operator==(const LineArray&, const LineArray&) = default;

private:
    std::size_t lines_ = 0;
    std::size_t nodes_ = 0;
    std::vector<double> data_;
};

/// values(n, j) = u_n(s_j), n = 0..N, j = 0..M.
using FieldSolution = LineArray;

struct LineGrid {
    std::size_t n_lines = 0;   // N
    double a = 0.0;
    double b = 0.0;
    double d = 0.0;
    std::vector<double> abscissae;             // x_n, n = 0..N
    std::size_t m_nodes = 0;                   // M
    std::vector<double> reference_nodes;       // s_j = j / M
    std::vector<std::pair<double, double>> per_line_range;  // (y1(x_n), y2(x_n))

    /// Physical ordinate of reference node j on line n.
    double y(std::size_t n, std::size_t j) const {
        const auto [lo, hi] = per_line_range[n];
        return lo + reference_nodes[j] * (hi - lo);
    }

    FieldSolution make_field(double fill = 0.0) const { return FieldSolution(n_lines + 1, m_nodes + 1, fill); }
};

inline LineGrid build_cartesian_grid(const CartesianDomain& domain, std::size_t n_lines, std::size_t m_nodes) {
    if (n_lines < 2) throw std::invalid_argument("grid needs N >= 2 lines");
    if (m_nodes < 2) throw std::invalid_argument("grid needs M >= 2 transverse intervals");
    if (!(domain.b > domain.a)) throw std::invalid_argument("domain requires b > a");
    if (!domain.y1 || !domain.y2) throw std::invalid_argument("domain boundary curves are empty");

    LineGrid grid;
    grid.n_lines = n_lines;
    grid.a = domain.a;
    grid.b = domain.b;
    grid.d = (domain.b - domain.a) / static_cast<double>(n_lines);
    grid.m_nodes = m_nodes;

    grid.abscissae.resize(n_lines + 1);
    grid.per_line_range.resize(n_lines + 1);
    for (std::size_t n = 0; n <= n_lines; ++n) {
        const double x = domain.a + static_cast<double>(n) * grid.d;
        const double lo = domain.y1(x);
        const double hi = domain.y2(x);
        if (!(hi > lo)) {
            throw std::invalid_argument("degenerate strip width at line " + std::to_string(n));
        }
        grid.abscissae[n] = x;
        grid.per_line_range[n] = {lo, hi};
    }

    grid.reference_nodes.resize(m_nodes + 1);
    for (std::size_t j = 0; j <= m_nodes; ++j) {
        grid.reference_nodes[j] = static_cast<double>(j) / static_cast<double>(m_nodes);
    }
    return grid;
}

/// h_n = (y2(x_n) - y1(x_n)) / M.
inline double transverse_step(const LineGrid& grid, std::size_t n) {
    if (n > grid.n_lines) throw std::out_of_range("line index out of range");
    const auto [lo, hi] = grid.per_line_range[n];
    return (hi - lo) / static_cast<double>(grid.m_nodes);
}

/// f sampled pointwise at (x_n, y(s_j)).
inline LineArray sample_source(const ProblemSpec& spec, const LineGrid& grid) {
    LineArray f(grid.n_lines + 1, grid.m_nodes + 1);
    for (std::size_t n = 0; n <= grid.n_lines; ++n) {
        for (std::size_t j = 0; j <= grid.m_nodes; ++j) {
            f(n, j) = spec.source(grid.abscissae[n], grid.y(n, j));
        }
    }
    return f;
}

inline bool satisfies_boundary(const FieldSolution& u, std::span<const double> line_n_data = {}) {
    const std::size_t last_line = u.lines() - 1;
    const std::size_t last_node = u.nodes() - 1;
    for (std::size_t j = 0; j < u.nodes(); ++j) {
        if (u(0, j) != 0.0) return false;
        const double expected = line_n_data.empty() ? 0.0 : line_n_data[j];
        if (u(last_line, j) != expected) return false;
    }
    for (std::size_t n = 1; n < last_line; ++n) {
        if (u(n, 0) != 0.0 || u(n, last_node) != 0.0) return false;
    }
    return true;
}

/// Sup-norm of the difference over all nodes.
inline double sup_difference(const LineArray& lhs, const LineArray& rhs) {
    if (!lhs.same_shape(rhs)) throw std::invalid_argument("sup_difference: shape mismatch");
    double worst = 0.0;
    const auto l = lhs.flat();
    const auto r = rhs.flat();
    for (std::size_t i = 0; i < l.size(); ++i) worst = std::max(worst, std::abs(l[i] - r[i]));
    return worst;
}

}  // namespace gml
