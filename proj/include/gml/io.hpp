#pragma once

#include <array>
#include <cstddef>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gml/polar.hpp"
#include "gml/polynomial.hpp"
#include "gml/problem.hpp"
#include "gml/proximal.hpp"

namespace gml {

/// Header `x,y,u`, one row per node, line-major, 17 significant digits.
inline void write_field_csv(std::ostream& os, const LineGrid& grid, const FieldSolution& u) {
    if (u.lines() != grid.n_lines + 1 || u.nodes() != grid.m_nodes + 1) {
        throw std::invalid_argument("write_field_csv: field does not match the grid");
    }
    os << "x,y,u\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t n = 0; n <= grid.n_lines; ++n) {
        for (std::size_t j = 0; j <= grid.m_nodes; ++j) {
            os << grid.abscissae[n] << ',' << grid.y(n, j) << ',' << u(n, j) << '\n';
        }
    }
}

/// Reads back a field written by write_field_csv for the same grid.
inline FieldSolution read_field_csv(std::istream& is, const LineGrid& grid) {
    std::string line;
    if (!std::getline(is, line) || line != "x,y,u") throw std::runtime_error("field CSV: missing header");
    FieldSolution u = grid.make_field();
    for (std::size_t n = 0; n <= grid.n_lines; ++n) {
        for (std::size_t j = 0; j <= grid.m_nodes; ++j) {
            if (!std::getline(is, line)) throw std::runtime_error("field CSV: too few rows");
            std::istringstream row(line);
            std::array<std::string, 3> cells;
            for (auto& cell : cells) {
                if (!std::getline(row, cell, ',')) throw std::runtime_error("field CSV: malformed row");
            }
            u(n, j) = std::stod(cells[2]);
        }
    }
    return u;
}

/// {"terms": [{"exp": [i,j,k,l,m], "coeff": c}, ...]}, lexicographic order.
inline nlohmann::json to_json(const BoundaryPolynomial& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [e, c] : p.terms()) {
        terms.push_back({{"exp", e}, {"coeff", c}});
    }
    return {{"terms", terms}};
}

inline BoundaryPolynomial polynomial_from_json(const nlohmann::json& j, TruncationSpec trunc = {}) {
    BoundaryPolynomial p(trunc);
    for (const auto& term : j.at("terms")) {
        p.accumulate(term.at("exp").get<Exponents>(), term.at("coeff").get<double>());
    }
    return p;
}

/// The columns used when the line expressions are printed by hand:
/// 1, u_f, u_f^2, u_f^3, u_f'', u_f u_f'', u_f^2 u_f'', u_f^3 u_f''.
inline constexpr std::array<Exponents, 8> kPrintedColumns{{
    {0, 0, 0, 0, 0}, {1, 0, 0, 0, 0}, {2, 0, 0, 0, 0}, {3, 0, 0, 0, 0},
    {0, 0, 1, 0, 0}, {1, 0, 1, 0, 0}, {2, 0, 1, 0, 0}, {3, 0, 1, 0, 0},
}};

inline nlohmann::json lines_to_json(const PolarSymbolicConfig& cfg, const LinePolynomials& lines) {
    nlohmann::json out;
    out["config"] = {{"n_lines", cfg.n_lines}, {"K", cfg.K},         {"epsilon", cfg.epsilon},
                     {"alpha", cfg.alpha},     {"beta", cfg.beta},   {"source", cfg.source},
                     {"iters", cfg.iters},     {"caps", cfg.trunc.caps}};
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t n = 1; n < cfg.n_lines; ++n) {
        auto entry = to_json(lines[n]);
        entry["line"] = n;
        entry["radius"] = cfg.radius(n);
        arr.push_back(std::move(entry));
    }
    out["lines"] = std::move(arr);
    return out;
}

/// One row per line with the printed-column coefficients.
inline void write_line_table(std::ostream& os, const LinePolynomials& lines, std::size_t stride = 1) {
    os << "line,1,u_f,u_f^2,u_f^3,u_f'',u_f*u_f'',u_f^2*u_f'',u_f^3*u_f''\n";
    os << std::setprecision(6);
    for (std::size_t n = stride; n + 1 < lines.size(); n += stride) {
        os << n;
        for (const auto& e : kPrintedColumns) os << ',' << lines[n].coeff(e);
        os << '\n';
    }
}

inline nlohmann::json to_json(const SolveReport& r) {
    return {{"outer_iterations", r.outer_iterations},
            {"anchor_update_norm", r.anchor_update_norm},
            {"residual_sup", r.residual_sup},
            {"converged", r.converged},
            {"error_estimates", r.error_estimates}};
}

}  // namespace gml
