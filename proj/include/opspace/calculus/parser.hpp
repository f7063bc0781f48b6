#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "opspace/calculus/space_expr.hpp"

namespace opspace::calculus {

namespace detail {

// Grammar:
//   expr  := term ("(x)" term)*
//   term  := "C[" exp "]" | "R[" exp "]" | "S[" exp "]" | "Sp[" exp "]{" expr "}"
//          | "I[" rat "]{" expr "," expr "}" | "dual(" expr ")" | "op(" expr ")"
//          | "scalar" | "(" expr ")"
//   exp   := "inf" | rat
class ExprParser {
public:
    explicit ExprParser(std::string_view text) : text_(text) {}

    SpaceExpr parse() {
        SpaceExpr e = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(pos_, what); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(std::string_view token) {
        skip_ws();
        if (text_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view token) {
        if (!accept(token)) fail("expected '" + std::string(token) + "'");
    }

    std::string_view bracket_contents() {
        skip_ws();
        std::size_t close = text_.find(']', pos_);
        if (close == std::string_view::npos) fail("missing ']'");
        std::string_view raw = text_.substr(pos_, close - pos_);
        while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back()))) raw.remove_suffix(1);
        return raw;
    }

    Exponent exponent() {
        std::size_t start = pos_;
        std::string_view raw = bracket_contents();
        try {
            Exponent e = Exponent::parse(raw);
            pos_ += raw.size();
            expect("]");
            return e;
        } catch (const ParseError&) {
            throw;
        } catch (const Error& err) {
            pos_ = start;
            fail(std::string("bad exponent '") + std::string(raw) + "'");
        }
    }

    Rational theta() {
        std::size_t start = pos_;
        std::string_view raw = bracket_contents();
        try {
            Rational t = parse_rational(raw);
            if (t <= 0 || t >= 1) throw Error(ErrorCode::invalid_parameter, "theta");
            pos_ += raw.size();
            expect("]");
            return t;
        } catch (const ParseError&) {
            throw;
        } catch (const Error&) {
            pos_ = start;
            fail("interpolation parameter must be a rational in (0,1)");
        }
    }

    SpaceExpr expr() {
        std::vector<SpaceExpr> factors{term()};
        while (accept("(x)")) factors.push_back(term());
        return factors.size() == 1 ? factors.front() : SpaceExpr::tensor(factors);
    }

    SpaceExpr term() {
        skip_ws();
        if (accept("Sp[")) {
            Exponent p = exponent();
            expect("{");
            SpaceExpr inner = expr();
            expect("}");
            return SpaceExpr::vector_schatten(p, inner);
        }
        if (accept("C[")) return SpaceExpr::column(exponent());
        if (accept("R[")) return SpaceExpr::row(exponent());
        if (accept("S[")) return SpaceExpr::schatten(exponent());
        if (accept("I[")) {
            Rational t = theta();
            expect("{");
            SpaceExpr e0 = expr();
            expect(",");
            SpaceExpr e1 = expr();
            expect("}");
            return SpaceExpr::interp(e0, e1, t);
        }
        if (accept("dual(")) {
            SpaceExpr inner = expr();
            expect(")");
            return SpaceExpr::dual(inner);
        }
        if (accept("op(")) {
            SpaceExpr inner = expr();
            expect(")");
            return SpaceExpr::opposite(inner);
        }
        if (accept("scalar")) return SpaceExpr::scalar();
        if (accept("(")) {
            SpaceExpr inner = expr();
            expect(")");
            return inner;
        }
        fail(pos_ >= text_.size() ? "unexpected end of input" : "unexpected token");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses the plain-text expression grammar; throws ParseError with the offset.
inline SpaceExpr parse_expr(std::string_view text) { return detail::ExprParser(text).parse(); }

} // namespace opspace::calculus
