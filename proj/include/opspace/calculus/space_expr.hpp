#pragma once

#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "opspace/error.hpp"
#include "opspace/exponent.hpp"

namespace opspace::calculus {

enum class Kind {
    scalar,
    column,
    row,
    schatten,
    tensor,  // Haagerup tensor product, n-ary and flat
    interp,  // complex interpolation (E0, E1)_theta
    dual,
    opposite,
    vector_schatten,  // S_p[E]
};

/// Immutable operator-space expression. Nodes are shared, so copies are cheap.
///
/// The Haagerup tensor product is associative and has the scalars as unit, so
/// `tensor()` flattens nested products and drops scalar factors; a product with
/// a single remaining factor is that factor. Every tensor node therefore has at
/// least two children and none of them is a tensor or a scalar.
class SpaceExpr {
public:
    SpaceExpr() : SpaceExpr(make(Kind::scalar)) {}

    static SpaceExpr scalar() { return SpaceExpr{}; }
    static SpaceExpr column(Exponent p) { return leaf(Kind::column, std::move(p)); }
    static SpaceExpr row(Exponent p) { return leaf(Kind::row, std::move(p)); }
    static SpaceExpr schatten(Exponent p) { return leaf(Kind::schatten, std::move(p)); }

    static SpaceExpr tensor(const std::vector<SpaceExpr>& factors) {
        std::vector<SpaceExpr> flat;
        for (const auto& f : factors) {
            if (f.kind() == Kind::tensor)
                flat.insert(flat.end(), f.node_->children.begin(), f.node_->children.end());
            else if (f.kind() != Kind::scalar)
                flat.push_back(f);
        }
        if (flat.empty()) return scalar();
        if (flat.size() == 1) return flat.front();
        SpaceExpr e = make(Kind::tensor);
        mut(e).children = std::move(flat);
        return e;
    }

    static SpaceExpr interp(SpaceExpr e0, SpaceExpr e1, Rational theta) {
        if (theta <= 0 || theta >= 1)
            throw Error(ErrorCode::invalid_parameter,
                        "interpolation parameter " + to_string(theta) + " outside (0,1)");
        SpaceExpr e = make(Kind::interp);
        mut(e).children = {std::move(e0), std::move(e1)};
        mut(e).theta = std::move(theta);
        return e;
    }

    static SpaceExpr dual(SpaceExpr child) { return unary(Kind::dual, std::move(child)); }
    static SpaceExpr opposite(SpaceExpr child) { return unary(Kind::opposite, std::move(child)); }

    static SpaceExpr vector_schatten(Exponent p, SpaceExpr child) {
        SpaceExpr e = unary(Kind::vector_schatten, std::move(child));
        mut(e).exponent = std::move(p);
        return e;
    }

    Kind kind() const noexcept { return node_->kind; }
    /// Exponent of a column, row, schatten or vector_schatten node.
    const Exponent& exponent() const noexcept { return node_->exponent; }
    /// Interpolation parameter of an interp node.
    const Rational& theta() const noexcept { return node_->theta; }
    std::span<const SpaceExpr> children() const noexcept { return node_->children; }
    const SpaceExpr& child(std::size_t i) const { return node_->children.at(i); }

    /// Copy of this node with child `i` replaced; tensors are re-flattened.
    SpaceExpr with_child(std::size_t i, SpaceExpr replacement) const {
        std::vector<SpaceExpr> kids = node_->children;
        kids.at(i) = std::move(replacement);
        return rebuild(std::move(kids));
    }

    SpaceExpr rebuild(std::vector<SpaceExpr> kids) const {
        switch (kind()) {
        case Kind::tensor: return tensor(kids);
        case Kind::interp: return interp(std::move(kids.at(0)), std::move(kids.at(1)), theta());
        case Kind::dual: return dual(std::move(kids.at(0)));
        case Kind::opposite: return opposite(std::move(kids.at(0)));
        case Kind::vector_schatten: return vector_schatten(exponent(), std::move(kids.at(0)));
        default: return *this;
        }
    }

    std::size_t size() const {
        std::size_t n = 1;
        for (const auto& c : children()) n += c.size();
        return n;
    }

    friend bool operator==(const SpaceExpr& a, const SpaceExpr& b) {
        if (a.node_ == b.node_) return true;
        if (a.kind() != b.kind() || a.exponent() != b.exponent() || a.theta() != b.theta() ||
            a.children().size() != b.children().size())
            return false;
        for (std::size_t i = 0; i < a.children().size(); ++i)
            if (!(a.children()[i] == b.children()[i])) return false;
        return true;
    }
    friend bool operator!=(const SpaceExpr& a, const SpaceExpr& b) { return !(a == b); }

    /// Plain-text form accepted by `parse_expr`.
    std::string str() const {
        switch (kind()) {
        case Kind::scalar: return "scalar";
        case Kind::column: return "C[" + exponent().str() + "]";
        case Kind::row: return "R[" + exponent().str() + "]";
        case Kind::schatten: return "S[" + exponent().str() + "]";
        case Kind::tensor: {
            std::string out;
            for (std::size_t i = 0; i < children().size(); ++i) {
                if (i) out += " (x) ";
                out += children()[i].str();
            }
            return out;
        }
        case Kind::interp:
            return "I[" + to_string(theta()) + "]{" + child(0).str() + ", " + child(1).str() + "}";
        case Kind::dual: return "dual(" + child(0).str() + ")";
        case Kind::opposite: return "op(" + child(0).str() + ")";
        case Kind::vector_schatten: return "Sp[" + exponent().str() + "]{" + child(0).str() + "}";
        }
        return "?";
    }

    friend std::ostream& operator<<(std::ostream& os, const SpaceExpr& e) { return os << e.str(); }

private:
    struct Node {
        Kind kind = Kind::scalar;
        Exponent exponent;
        Rational theta{0};
        std::vector<SpaceExpr> children;
    };

    explicit SpaceExpr(std::shared_ptr<Node> node) : node_(std::move(node)) {}

    static SpaceExpr make(Kind kind) {
        auto node = std::make_shared<Node>();
        node->kind = kind;
        return SpaceExpr(std::move(node));
    }
    // Only used on freshly made, unshared nodes.
    static Node& mut(SpaceExpr& e) { return const_cast<Node&>(*e.node_); }

    static SpaceExpr leaf(Kind kind, Exponent p) {
        SpaceExpr e = make(kind);
        mut(e).exponent = std::move(p);
        return e;
    }
    static SpaceExpr unary(Kind kind, SpaceExpr child) {
        SpaceExpr e = make(kind);
        mut(e).children = {std::move(child)};
        return e;
    }

    std::shared_ptr<const Node> node_;
};

/// Column exponent of a column or row leaf: C_p -> p and R_p -> p' (C_p = R_p').
inline std::optional<Exponent> column_exponent(const SpaceExpr& e) {
    if (e.kind() == Kind::column) return e.exponent();
    if (e.kind() == Kind::row) return e.exponent().conjugate();
    return std::nullopt;
}

} // namespace opspace::calculus
