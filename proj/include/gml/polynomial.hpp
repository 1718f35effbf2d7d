#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace gml {

/// Boundary symbols, in differentiation order: u_f, u_f', u_f'', u_f''', u_f''''.
inline constexpr std::size_t kSymbolCount = 5;
using Exponents = std::array<int, kSymbolCount>;

/// Per-symbol maximum exponent. Monomials exceeding any cap are discarded.
struct TruncationSpec {
    Exponents caps{3, 1, 1, 0, 0};

    bool admits(const Exponents& e) const noexcept {
        for (std::size_t v = 0; v < kSymbolCount; ++v) {
            if (e[v] < 0 || e[v] > caps[v]) return false;
        }
        return true;
    }

    friend bool operator==(const TruncationSpec&, const TruncationSpec&) = default;
};

/// Sum of c * u_f^i u_f'^j u_f''^k u_f'''^l u_f''''^m, truncated by a
/// TruncationSpec. Zero coefficients are never stored.
class BoundaryPolynomial {
public:
    using TermMap = std::map<Exponents, double>;

    /// |c| below this is treated as an exact zero.
    static constexpr double kZeroThreshold = 1e-300;

    explicit BoundaryPolynomial(TruncationSpec trunc = {}) : trunc_(trunc) { validate_caps(); }

    static BoundaryPolynomial constant(double value, TruncationSpec trunc = {}) {
        BoundaryPolynomial p(trunc);
        p.accumulate({0, 0, 0, 0, 0}, value);
        return p;
    }

    /// u_f^(order), order 0..4.
    static BoundaryPolynomial symbol(std::size_t order, TruncationSpec trunc = {}) {
        if (order >= kSymbolCount) throw std::out_of_range("symbol order must be < 5");
        BoundaryPolynomial p(trunc);
        Exponents e{};
        e[order] = 1;
        p.accumulate(e, 1.0);
        return p;
    }

    static BoundaryPolynomial monomial(const Exponents& e, double coeff, TruncationSpec trunc = {}) {
        BoundaryPolynomial p(trunc);
        p.accumulate(e, coeff);
        return p;
    }

    const TermMap& terms() const noexcept { return terms_; }
    const TruncationSpec& truncation() const noexcept { return trunc_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    double coeff(const Exponents& e) const {
        const auto it = terms_.find(e);
        return it == terms_.end() ? 0.0 : it->second;
    }

    /// Adds c * monomial(e); silently drops e if it exceeds the caps.
    void accumulate(const Exponents& e, double c) {
        if (!trunc_.admits(e)) return;
        const double sum = (terms_[e] += c);
        if (std::abs(sum) < kZeroThreshold) terms_.erase(e);
    }

    BoundaryPolynomial& operator+=(const BoundaryPolynomial& q) {
        require_same_spec(q);
        for (const auto& [e, c] : q.terms_) accumulate(e, c);
        return *this;
    }

    BoundaryPolynomial& operator-=(const BoundaryPolynomial& q) {
        require_same_spec(q);
        for (const auto& [e, c] : q.terms_) accumulate(e, -c);
        return *this;
    }

    BoundaryPolynomial& operator*=(double s) {
        TermMap scaled;
        for (const auto& [e, c] : terms_) {
            const double v = c * s;
            if (std::abs(v) >= kZeroThreshold) scaled.emplace(e, v);
        }
        terms_ = std::move(scaled);
        return *this;
    }

    friend BoundaryPolynomial operator+(BoundaryPolynomial p, const BoundaryPolynomial& q) { return p += q; }
    friend BoundaryPolynomial operator-(BoundaryPolynomial p, const BoundaryPolynomial& q) { return p -= q; }
    friend BoundaryPolynomial operator*(BoundaryPolynomial p, double s) { return p *= s; }
    friend BoundaryPolynomial operator*(double s, BoundaryPolynomial p) { return p *= s; }

    /// Distributive product; monomials exceeding the caps are dropped.
    friend BoundaryPolynomial operator*(const BoundaryPolynomial& p, const BoundaryPolynomial& q) {
        p.require_same_spec(q);
        BoundaryPolynomial out(p.trunc_);
        for (const auto& [ep, cp] : p.terms_) {
            for (const auto& [eq, cq] : q.terms_) {
                Exponents e;
                for (std::size_t v = 0; v < kSymbolCount; ++v) e[v] = ep[v] + eq[v];
                out.accumulate(e, cp * cq);
            }
        }
        return out;
    }

    friend bool operator==(const BoundaryPolynomial&, const BoundaryPolynomial&) = default;

    void require_same_spec(const BoundaryPolynomial& q) const {
        if (!(trunc_ == q.trunc_)) throw std::invalid_argument("polynomials have different truncation specs");
    }

private:
    void validate_caps() const {
        for (int cap : trunc_.caps) {
            if (cap < 0) throw std::invalid_argument("truncation caps must be non-negative");
        }
    }

    TruncationSpec trunc_;
    TermMap terms_;
};

inline BoundaryPolynomial poly_add(const BoundaryPolynomial& p, const BoundaryPolynomial& q) { return p + q; }
inline BoundaryPolynomial poly_mul(const BoundaryPolynomial& p, const BoundaryPolynomial& q) { return p * q; }

namespace detail {

// d/dx of a raw term map, no truncation. The top symbol differentiates to a
// symbol outside the ladder and is dropped.
inline BoundaryPolynomial::TermMap differentiate_terms(const BoundaryPolynomial::TermMap& terms) {
    BoundaryPolynomial::TermMap out;
    for (const auto& [e, c] : terms) {
        for (std::size_t v = 0; v + 1 < kSymbolCount; ++v) {
            if (e[v] == 0) continue;
            Exponents next = e;
            next[v] -= 1;
            next[v + 1] += 1;
            out[next] += c * e[v];
        }
    }
    return out;
}

}  // namespace detail

/// d^order/dx^order computed exactly, truncated once at the end. For
/// order > 1 this differs from iterating poly_diff, which truncates at every
/// step.
inline BoundaryPolynomial poly_derivative(const BoundaryPolynomial& p, std::size_t order) {
    auto terms = p.terms();
    for (std::size_t k = 0; k < order; ++k) terms = detail::differentiate_terms(terms);
    BoundaryPolynomial out(p.truncation());
    for (const auto& [e, c] : terms) out.accumulate(e, c);
    return out;
}

/// Product rule over the ladder u_f -> u_f' -> ... -> u_f'''', then truncate.
inline BoundaryPolynomial poly_diff(const BoundaryPolynomial& p) { return poly_derivative(p, 1); }

/// Substitutes all five symbols.
inline double poly_eval(const BoundaryPolynomial& p, const std::array<double, kSymbolCount>& values) {
    double sum = 0.0;
    for (const auto& [e, c] : p.terms()) {
        double term = c;
        for (std::size_t v = 0; v < kSymbolCount; ++v) {
            for (int k = 0; k < e[v]; ++k) term *= values[v];
        }
        sum += term;
    }
    return sum;
}

/// Substitutes u_f, u_f', u_f''. The polynomial must not depend on u_f''' or
/// u_f''''.
inline double poly_eval(const BoundaryPolynomial& p, double uf, double uf1, double uf2) {
    for (const auto& [e, c] : p.terms()) {
        if (e[3] != 0 || e[4] != 0) {
            throw std::invalid_argument("poly_eval: polynomial depends on u_f''' or u_f''''");
        }
    }
    return poly_eval(p, {uf, uf1, uf2, 0.0, 0.0});
}

/// "1.2 + 0.3 u_f^2 u_f''", terms in lexicographic exponent order.
inline std::string to_string(const BoundaryPolynomial& p, int precision = 6) {
    static constexpr std::array<const char*, kSymbolCount> names{"u_f", "u_f'", "u_f''", "u_f'''", "u_f''''"};
    if (p.is_zero()) return "0";
    std::ostringstream os;
    os << std::setprecision(precision);
    bool first = true;
    for (const auto& [e, c] : p.terms()) {
        if (first) {
            os << c;
        } else {
            os << (c < 0 ? " - " : " + ") << std::abs(c);
        }
        first = false;
        for (std::size_t v = 0; v < kSymbolCount; ++v) {
            if (e[v] == 0) continue;
            os << ' ' << names[v];
            if (e[v] > 1) os << '^' << e[v];
        }
    }
    return os.str();
}

}  // namespace gml
