#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gml {

class ExpressionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Arithmetic over x and y: numbers, pi, + - * /, unary minus, parentheses,
/// sin, cos, exp. Parsed once into a closure tree.
class Expression {
public:
    using Eval = std::function<double(double, double)>;

    static Expression parse(std::string_view text) {
        Parser p{text, 0};
        Eval root = p.sum();
        p.skip_space();
        if (p.pos != text.size()) p.fail("unexpected trailing input");
        return Expression(std::move(root));
    }

    double operator()(double x, double y) const { return eval_(x, y); }

private:
    explicit Expression(Eval eval) : eval_(std::move(eval)) {}

    struct Parser {
        std::string_view text;
        std::size_t pos;

        [[noreturn]] void fail(const std::string& what) const {
            throw ExpressionError(what + " at position " + std::to_string(pos) + " in '" + std::string(text) + "'");
        }

        void skip_space() {
            while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        }

        bool accept(char c) {
            skip_space();
            if (pos < text.size() && text[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }

        Eval sum() {
            Eval lhs = product();
            for (;;) {
                if (accept('+')) {
                    lhs = [l = lhs, r = product()](double x, double y) { return l(x, y) + r(x, y); };
                } else if (accept('-')) {
                    lhs = [l = lhs, r = product()](double x, double y) { return l(x, y) - r(x, y); };
                } else {
                    return lhs;
                }
            }
        }

        Eval product() {
            Eval lhs = unary();
            for (;;) {
                if (accept('*')) {
                    lhs = [l = lhs, r = unary()](double x, double y) { return l(x, y) * r(x, y); };
                } else if (accept('/')) {
                    lhs = [l = lhs, r = unary()](double x, double y) { return l(x, y) / r(x, y); };
                } else {
                    return lhs;
                }
            }
        }

        Eval unary() {
            if (accept('-')) {
                return [v = unary()](double x, double y) { return -v(x, y); };
            }
            if (accept('+')) return unary();
            return primary();
        }

        Eval primary() {
            skip_space();
            if (pos >= text.size()) fail("unexpected end of expression");
            if (accept('(')) {
                Eval inner = sum();
                if (!accept(')')) fail("expected ')'");
                return inner;
            }
            const char c = text[pos];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
            if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
            fail(std::string("unexpected character '") + c + "'");
        }

        Eval number() {
            const std::string rest(text.substr(pos));
            std::size_t used = 0;
            double value = 0.0;
            try {
                value = std::stod(rest, &used);
            } catch (const std::exception&) {
                fail("malformed number");
            }
            pos += used;
            return [value](double, double) { return value; };
        }

        Eval identifier() {
            const std::size_t start = pos;
            while (pos < text.size() && std::isalnum(static_cast<unsigned char>(text[pos]))) ++pos;
            const std::string_view name = text.substr(start, pos - start);
            if (name == "x") return [](double x, double) { return x; };
            if (name == "y") return [](double, double y) { return y; };
            if (name == "pi") return [](double, double) { return std::numbers::pi; };

            double (*fn)(double) = nullptr;
            if (name == "sin") fn = [](double v) { return std::sin(v); };
            if (name == "cos") fn = [](double v) { return std::cos(v); };
            if (name == "exp") fn = [](double v) { return std::exp(v); };
            if (fn == nullptr) fail("unknown identifier '" + std::string(name) + "'");
            if (!accept('(')) fail("expected '(' after function name");
            Eval arg = sum();
            if (!accept(')')) fail("expected ')'");
            return [fn, arg](double x, double y) { return fn(arg(x, y)); };
        }
    };

    Eval eval_;
};

/// "const:<v>" or an expression in x and y.
inline std::function<double(double, double)> parse_source(std::string_view text) {
    constexpr std::string_view prefix = "const:";
    if (text.substr(0, prefix.size()) == prefix) {
        const std::string value(text.substr(prefix.size()));
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(value, &used);
        } catch (const std::exception&) {
            throw ExpressionError("malformed constant source '" + std::string(text) + "'");
        }
        if (used != value.size()) throw ExpressionError("malformed constant source '" + std::string(text) + "'");
        return [v](double, double) { return v; };
    }
    auto expr = std::make_shared<Expression>(Expression::parse(text));
    return [expr](double x, double y) { return (*expr)(x, y); };
}

}  // namespace gml
