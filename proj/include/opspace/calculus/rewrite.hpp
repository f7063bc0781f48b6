#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "opspace/calculus/space_expr.hpp"
#include "opspace/calculus/trace.hpp"

namespace opspace::calculus {

enum class RuleId { R1, R2, R3, R4, R5, R6, R7, R8 };

inline constexpr std::array<RuleId, 8> all_rules{RuleId::R1, RuleId::R2, RuleId::R3, RuleId::R4,
                                                 RuleId::R5, RuleId::R6, RuleId::R7, RuleId::R8};

struct RuleInfo {
    const char* id;
    EquivalenceLevel level;
    const char* citation;
};

inline RuleInfo rule_info(RuleId rule) {
    using L = EquivalenceLevel;
    switch (rule) {
    case RuleId::R1: return {"R1", L::completely_isometric, "C_{p_theta} = (C_{p_0}, C_{p_1})_theta"};
    case RuleId::R2: return {"R2", L::completely_isometric, "C_p (x)_h C_p = C_p"};
    case RuleId::R3: return {"R3", L::isometric, "C_u (x)_h C_v = S_{2/(1-1/v+1/u)} (Banach)"};
    case RuleId::R4: return {"R4", L::completely_isometric, "C_p^* = C_{p'} = R_p"};
    case RuleId::R5: return {"R5", L::completely_isometric, "S_p[E] = C_p (x)_h E (x)_h R_p"};
    case RuleId::R6: return {"R6", L::completely_isometric, "(E (x)_h F)^op = F^op (x)_h E^op, C^op = R"};
    case RuleId::R7: return {"R7", L::isometric, "S_{p_theta} = (S_{p_0}, S_{p_1})_theta"};
    case RuleId::R8: return {"R8", L::completely_isometric, "C_p (x)_h ... (x)_h C_p = C_p"};
    }
    return {"?", L::isomorphic, ""};
}

inline std::optional<RuleId> parse_rule(std::string_view id) {
    for (RuleId r : all_rules)
        if (id == rule_info(r).id) return r;
    return std::nullopt;
}

/// Default priority at a target level. Completely isometric rules come in the
/// order R1, R2, R4, R5, R6, R8. At the isometric target R3 and R7 are tried
/// first so that Banach-level redexes reach their Schatten form.
inline std::vector<RuleId> default_priority(EquivalenceLevel target) {
    std::vector<RuleId> out;
    if (target <= EquivalenceLevel::isometric) out = {RuleId::R3, RuleId::R7};
    for (RuleId r : {RuleId::R1, RuleId::R2, RuleId::R4, RuleId::R5, RuleId::R6, RuleId::R8}) out.push_back(r);
    return out;
}

namespace detail {

// Leftmost maximal run of factors with a common column exponent whose length
// satisfies `accept`; returns [begin, end).
template <class Accept>
std::optional<std::pair<std::size_t, std::size_t>> column_run(std::span<const SpaceExpr> factors, Accept accept) {
    std::size_t i = 0;
    while (i < factors.size()) {
        auto ci = column_exponent(factors[i]);
        std::size_t j = i + 1;
        if (ci)
            while (j < factors.size() && column_exponent(factors[j]) == ci) ++j;
        if (ci && accept(j - i)) return std::pair{i, j};
        i = j;
    }
    return std::nullopt;
}

inline SpaceExpr collapse_run(const SpaceExpr& tensor, std::pair<std::size_t, std::size_t> run) {
    auto kids = tensor.children();
    std::vector<SpaceExpr> out(kids.begin(), kids.begin() + run.first);
    out.push_back(SpaceExpr::column(*column_exponent(kids[run.first])));
    out.insert(out.end(), kids.begin() + run.second, kids.end());
    return SpaceExpr::tensor(out);
}

} // namespace detail

/// Rewrites `node` itself by `rule`, or returns nullopt when it is not a redex.
/// Column and row leaves are matched through their column exponent, so R_p and
/// C_{p'} are interchangeable in every pattern. Isometric rules only fire in a
/// Banach context: the root or a position reached from it through
/// interpolation nodes alone.
inline std::optional<SpaceExpr> apply_rule(RuleId rule, const SpaceExpr& node, bool banach_context) {
    switch (rule) {
    case RuleId::R1:
        if (node.kind() == Kind::interp) {
            auto c0 = column_exponent(node.child(0));
            auto c1 = column_exponent(node.child(1));
            if (c0 && c1) return SpaceExpr::column(interp_exponent(*c0, *c1, node.theta()));
        }
        return std::nullopt;
    case RuleId::R2:
        if (node.kind() == Kind::tensor) {
            if (auto run = detail::column_run(node.children(), [](std::size_t n) { return n == 2; }))
                return detail::collapse_run(node, *run);
        }
        return std::nullopt;
    case RuleId::R8:
        if (node.kind() == Kind::tensor) {
            if (auto run = detail::column_run(node.children(), [](std::size_t n) { return n >= 3; }))
                return detail::collapse_run(node, *run);
        }
        return std::nullopt;
    case RuleId::R3:
        if (banach_context && node.kind() == Kind::tensor && node.children().size() == 2) {
            auto u = column_exponent(node.child(0));
            auto v = column_exponent(node.child(1));
            if (u && v)
                return SpaceExpr::schatten(
                    Exponent::from_reciprocal((1 - v->reciprocal() + u->reciprocal()) / 2));
        }
        return std::nullopt;
    case RuleId::R4:
        if (node.kind() == Kind::row) return SpaceExpr::column(node.exponent().conjugate());
        if (node.kind() == Kind::dual) {
            if (auto c = column_exponent(node.child(0))) return SpaceExpr::column(c->conjugate());
        }
        return std::nullopt;
    case RuleId::R5:
        if (node.kind() == Kind::vector_schatten)
            return SpaceExpr::tensor({SpaceExpr::column(node.exponent()), node.child(0),
                                      SpaceExpr::row(node.exponent())});
        return std::nullopt;
    case RuleId::R6:
        if (node.kind() == Kind::opposite) {
            const SpaceExpr& inner = node.child(0);
            switch (inner.kind()) {
            case Kind::scalar: return SpaceExpr::scalar();
            case Kind::column: return SpaceExpr::row(inner.exponent());
            case Kind::row: return SpaceExpr::column(inner.exponent());
            case Kind::tensor: {
                std::vector<SpaceExpr> rev;
                for (auto it = inner.children().rbegin(); it != inner.children().rend(); ++it)
                    rev.push_back(SpaceExpr::opposite(*it));
                return SpaceExpr::tensor(rev);
            }
            default: break;
            }
        }
        return std::nullopt;
    case RuleId::R7:
        if (banach_context && node.kind() == Kind::interp && node.child(0).kind() == Kind::schatten &&
            node.child(1).kind() == Kind::schatten)
            return SpaceExpr::schatten(
                interp_exponent(node.child(0).exponent(), node.child(1).exponent(), node.theta()));
        return std::nullopt;
    }
    return std::nullopt;
}

namespace detail {

// Post-order (leftmost-innermost) search for the first redex of `rule`.
inline std::optional<SpaceExpr> rewrite_first(RuleId rule, const SpaceExpr& e, bool banach_context) {
    bool child_context = banach_context && e.kind() == Kind::interp;
    for (std::size_t i = 0; i < e.children().size(); ++i) {
        if (auto sub = rewrite_first(rule, e.child(i), child_context)) return e.with_child(i, *sub);
    }
    return apply_rule(rule, e, banach_context);
}

} // namespace detail

struct Normalized {
    SpaceExpr expr;
    DerivationTrace trace;
};

/// Rewrites to a fixed point. Each step applies the highest-priority rule that
/// has a redex, at its leftmost-innermost position. `priority` defaults to
/// `default_priority(target)` and may only contain rules at least as strong as
/// `target`.
inline Normalized normalize(const SpaceExpr& expr, EquivalenceLevel target, std::span<const RuleId> priority = {}) {
    std::vector<RuleId> order(priority.begin(), priority.end());
    if (order.empty()) order = default_priority(target);
    for (RuleId r : order)
        if (rule_info(r).level < target)
            throw Error(ErrorCode::invalid_parameter,
                        std::string("rule ") + rule_info(r).id + " is weaker than the target level");

    DerivationTrace trace(expr);
    SpaceExpr current = expr;
    constexpr std::size_t step_limit = 100000;
    for (std::size_t step = 0; step < step_limit; ++step) {
        bool fired = false;
        for (RuleId r : order) {
            if (auto next = detail::rewrite_first(r, current, true)) {
                RuleInfo info = rule_info(r);
                trace.push(info.id, *next, info.level, info.citation);
                current = *next;
                fired = true;
                break;
            }
        }
        if (!fired) return {current, trace};
    }
    throw Error(ErrorCode::not_applicable, "rewrite limit exceeded for " + expr.str());
}

/// Isometry class of the underlying Banach space of a canonical form.
struct BanachClass {
    enum class Type { hilbert, schatten, scalar, other };
    Type type = Type::other;
    Exponent p;         // schatten only
    std::string form;   // other only

    std::string str() const {
        switch (type) {
        case Type::hilbert: return "hilbert";
        case Type::schatten: return "S[" + p.str() + "]";
        case Type::scalar: return "scalar";
        case Type::other: return "other:" + form;
        }
        return "?";
    }
    friend bool operator==(const BanachClass& a, const BanachClass& b) { return a.str() == b.str(); }
};

/// Column and row spaces, S_2, and n-fold products of one column space are all l_2.
inline BanachClass banach_class(const SpaceExpr& e) {
    BanachClass out;
    switch (e.kind()) {
    case Kind::scalar: out.type = BanachClass::Type::scalar; return out;
    case Kind::column:
    case Kind::row: out.type = BanachClass::Type::hilbert; return out;
    case Kind::schatten:
        if (e.exponent() == Exponent::from_value(2)) {
            out.type = BanachClass::Type::hilbert;
        } else {
            out.type = BanachClass::Type::schatten;
            out.p = e.exponent();
        }
        return out;
    case Kind::tensor: {
        auto first = column_exponent(e.child(0));
        bool uniform = first.has_value();
        for (const auto& c : e.children()) uniform = uniform && column_exponent(c) == first;
        if (uniform) {
            out.type = BanachClass::Type::hilbert;
            return out;
        }
        break;
    }
    default: break;
    }
    out.form = e.str();
    return out;
}

} // namespace opspace::calculus
