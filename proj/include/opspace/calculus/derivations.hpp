#pragma once

#include <string>
#include <vector>

#include "opspace/calculus/rewrite.hpp"

namespace opspace::calculus {

namespace detail {

inline const char* kouba_citation() { return "(E0 (x)_h F0, E1 (x)_h F1)_theta = (E0,E1)_theta (x)_h (F0,F1)_theta"; }
inline const char* hilbert_citation() { return "C_1 (x)_h ... (x)_h C_1 = C_inf (x)_h ... (x)_h C_inf = l_2 (Banach)"; }

// Interp of a single factor pair after distribution: equal endpoints collapse,
// two rows interpolate to a row, any other column/row pair to a column.
inline SpaceExpr interp_factor(const SpaceExpr& a, const SpaceExpr& b, const Rational& theta) {
    if (a == b) return a;
    if (a.kind() == Kind::row && b.kind() == Kind::row)
        return SpaceExpr::row(interp_exponent(a.exponent(), b.exponent(), theta));
    auto ca = column_exponent(a);
    auto cb = column_exponent(b);
    if (ca && cb) return SpaceExpr::column(interp_exponent(*ca, *cb, theta));
    return SpaceExpr::interp(a, b, theta);
}

inline std::vector<SpaceExpr> factors_of(const SpaceExpr& e) {
    if (e.kind() == Kind::tensor) return {e.children().begin(), e.children().end()};
    return {e};
}

inline std::string rat(const Rational& r) { return opspace::to_string(r); }

} // namespace detail

/// Kouba's theorem, left to right: Interp(A1 (x) .. (x) An, B1 (x) .. (x) Bn, t)
/// becomes Interp(A1,B1,t) (x) .. (x) Interp(An,Bn,t), with each factor
/// simplified when its endpoints are equal or both column/row spaces.
inline SpaceExpr kouba_distribute(const SpaceExpr& expr) {
    if (expr.kind() != Kind::interp || expr.child(0).kind() != Kind::tensor ||
        expr.child(1).kind() != Kind::tensor)
        throw Error(ErrorCode::not_applicable, "kouba_distribute needs an interpolation of two tensor products");
    auto a = expr.child(0).children();
    auto b = expr.child(1).children();
    if (a.size() != b.size())
        throw Error(ErrorCode::not_applicable, "tensor arity mismatch in " + expr.str());
    std::vector<SpaceExpr> out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(detail::interp_factor(a[i], b[i], expr.theta()));
    return SpaceExpr::tensor(out);
}

/// Kouba's theorem, right to left: a tensor product of interpolation nodes
/// sharing one parameter becomes a single interpolation of tensor products.
inline SpaceExpr kouba_factor(const SpaceExpr& expr) {
    if (expr.kind() != Kind::tensor)
        throw Error(ErrorCode::not_applicable, "kouba_factor needs a tensor product");
    std::vector<SpaceExpr> left, right;
    const Rational& theta = expr.child(0).theta();
    for (const auto& f : expr.children()) {
        if (f.kind() != Kind::interp || f.theta() != theta)
            throw Error(ErrorCode::not_applicable, "factors must be interpolations with a common parameter");
        left.push_back(f.child(0));
        right.push_back(f.child(1));
    }
    return SpaceExpr::interp(SpaceExpr::tensor(left), SpaceExpr::tensor(right), theta);
}

struct EmbeddingDerivation {
    Exponent u;  // outer index in S_u[S_v]
    Exponent v;
    Rational theta;  // interpolation parameter of the proof
    Exponent q;      // theta * p  (or theta * p' in the opposite-space branch)
    Exponent r;      // theta * p' (or theta * p)
    bool via_opposite = false;
    DerivationTrace trace;
};

namespace detail {

// Chain for 1 < s <= 2 on a product X_s (x) X_inf (x) X_{s'} of columns (rows
// when `rows`), ending at S_{2s/(s+1)} or S_{2s/(s-1)} tensored with the
// remaining row factor, then embedded into S_u[S_v].
inline void embedding_chain(DerivationTrace& trace, const Exponent& s, bool rows, EmbeddingDerivation& out) {
    auto leaf = [rows](const Exponent& e) { return rows ? SpaceExpr::row(e) : SpaceExpr::column(e); };
    const Exponent inf = Exponent::infinity();
    const Exponent one = Exponent::one();
    Rational theta = (1 + s.reciprocal()) / 2;
    Exponent q = Exponent::from_reciprocal(s.reciprocal() / theta);
    Exponent r = Exponent::from_reciprocal(s.conjugate().reciprocal() / theta);
    out.theta = theta;
    out.q = q;
    out.r = r;
    std::string note = "theta=" + rat(theta) + ", q=" + q.str() + ", r=" + r.str();

    SpaceExpr infs = SpaceExpr::tensor({leaf(inf), leaf(inf), leaf(inf)});
    SpaceExpr top = SpaceExpr::tensor({leaf(q), leaf(inf), leaf(r)});
    trace.push("KOUBA-INV", SpaceExpr::interp(infs, top, theta), EquivalenceLevel::completely_isometric,
               kouba_citation(), note);
    SpaceExpr ones = SpaceExpr::tensor({leaf(one), leaf(one), leaf(one)});
    SpaceExpr swapped = SpaceExpr::interp(ones, top, theta);
    trace.push("HILB", swapped, EquivalenceLevel::isometric, hilbert_citation(), note);
    SpaceExpr distributed = kouba_distribute(swapped);
    trace.push("KOUBA", distributed, EquivalenceLevel::completely_isometric, kouba_citation(), note);

    // distributed = X_a (x) X_b (x) X_c with X_a = C_{2s/(s+1)} (R_... for rows)
    const SpaceExpr& fa = distributed.child(0);
    const SpaceExpr& fb = distributed.child(1);
    const SpaceExpr& fc = distributed.child(2);
    // Rewrite the first two factors as C_w (x) R_w so they form S_w.
    Exponent w = rows ? fa.exponent().conjugate() : fa.exponent();
    Exponent outer = rows ? fc.exponent() : fc.exponent().conjugate();
    if (column_exponent(fb) != w.conjugate())
        throw Error(ErrorCode::not_applicable, "middle factor " + fb.str() + " does not pair with S_" + w.str());
    SpaceExpr paired = SpaceExpr::tensor({SpaceExpr::column(w), SpaceExpr::row(w), SpaceExpr::row(outer)});
    if (rows)
        trace.push("R4-INV", paired, EquivalenceLevel::completely_isometric, "C_p = R_{p'}",
                   "R_" + fa.exponent().str() + " = C_" + w.str());
    else
        trace.push("R4-INV", paired, EquivalenceLevel::completely_isometric, "C_p = R_{p'}",
                   "C_" + fb.exponent().str() + " = R_" + w.str() + ", C_" + fc.exponent().str() + " = R_" +
                       outer.str());
    trace.push("R5-INV", SpaceExpr::tensor({SpaceExpr::schatten(w), SpaceExpr::row(outer)}),
               EquivalenceLevel::completely_isometric, "S_p[C] = C_p (x)_h R_p = S_p");
    trace.push("EMBED", SpaceExpr::vector_schatten(outer, SpaceExpr::schatten(w)), EquivalenceLevel::isometric,
               "S_v (x)_h R_u is a subspace of C_u (x)_h S_v (x)_h R_u = S_u[S_v]", {}, true);
    out.u = outer;
    out.v = w;
}

} // namespace detail

/// Isometric embedding S_p[C] -> S_u[S_v] for 1 < p < inf with its proof chain.
/// p <= 2 uses the direct interpolation argument, p >= 2 the opposite-space
/// argument; at p = 2 both derivations are returned.
inline std::vector<EmbeddingDerivation> derive_embedding(const Exponent& p) {
    if (!p.is_strict())
        throw Error(ErrorCode::out_of_range, "derive_embedding needs 1 < p < inf, got " + p.str());
    const Exponent inf = Exponent::infinity();
    const Exponent two = Exponent::from_value(2);
    SpaceExpr start = SpaceExpr::vector_schatten(p, SpaceExpr::column(inf));
    std::vector<EmbeddingDerivation> out;

    if (!(two < p)) {  // p <= 2
        EmbeddingDerivation d;
        d.trace = DerivationTrace(start);
        d.trace.push("R5", SpaceExpr::tensor({SpaceExpr::column(p), SpaceExpr::column(inf), SpaceExpr::row(p)}),
                     EquivalenceLevel::completely_isometric, rule_info(RuleId::R5).citation);
        d.trace.push("R4",
                     SpaceExpr::tensor({SpaceExpr::column(p), SpaceExpr::column(inf), SpaceExpr::column(p.conjugate())}),
                     EquivalenceLevel::completely_isometric, rule_info(RuleId::R4).citation);
        detail::embedding_chain(d.trace, p, false, d);
        out.push_back(std::move(d));
    }
    if (!(p < two)) {  // p >= 2
        Exponent s = p.conjugate();
        EmbeddingDerivation d;
        d.via_opposite = true;
        d.trace = DerivationTrace(start);
        d.trace.push("R5", SpaceExpr::tensor({SpaceExpr::column(p), SpaceExpr::column(inf), SpaceExpr::row(p)}),
                     EquivalenceLevel::completely_isometric, rule_info(RuleId::R5).citation);
        d.trace.push("R4", SpaceExpr::tensor({SpaceExpr::column(p), SpaceExpr::column(inf), SpaceExpr::column(s)}),
                     EquivalenceLevel::completely_isometric, rule_info(RuleId::R4).citation);
        SpaceExpr rows = SpaceExpr::tensor({SpaceExpr::row(s), SpaceExpr::row(inf), SpaceExpr::row(p)});
        d.trace.push("R6-INV", SpaceExpr::opposite(rows), EquivalenceLevel::completely_isometric,
                     rule_info(RuleId::R6).citation, "S_p[C] = (S_{p'}[R])^op");
        d.trace.push("OP-BANACH", rows, EquivalenceLevel::isometric, "E^op = E as Banach spaces");
        detail::embedding_chain(d.trace, s, true, d);
        out.push_back(std::move(d));
    }
    for (const auto& d : out)
        if (!d.u.is_strict() || !d.v.is_strict())
            throw Error(ErrorCode::out_of_range, "embedding exponents left (1, inf)");
    return out;
}

struct FiniteExponentForm {
    Rational theta;
    std::vector<Exponent> qs;
    bool dual_case = false;  // some p_k = 1: solved through conjugate exponents
    /// The product is (1-theta)-Hilbertian, hence super-reflexive.
    Rational hilbertian_parameter() const { return 1 - theta; }
    DerivationTrace trace;
};

/// Rewrites C_{p1} (x) .. (x) C_{pn} isometrically as C_{q1} (x) .. (x) C_{qn}
/// with every 1 < q_k < inf. Needs all p_k > 1 or all p_k < inf. Without an
/// explicit theta the midpoint (1 + max_k t_k)/2 is used, t_k = 1/p_k
/// (1/p_k' in the dual case).
inline FiniteExponentForm finite_exponent_form(const std::vector<Exponent>& ps,
                                               std::optional<Rational> theta_override = std::nullopt) {
    if (ps.empty()) throw Error(ErrorCode::invalid_parameter, "empty exponent list");
    bool all_above_one = std::all_of(ps.begin(), ps.end(), [](const Exponent& p) { return !p.is_one(); });
    bool all_finite = std::all_of(ps.begin(), ps.end(), [](const Exponent& p) { return !p.is_infinite(); });
    if (!all_above_one && !all_finite)
        throw Error(ErrorCode::not_applicable, "exponent list contains both 1 and inf");

    FiniteExponentForm out;
    out.dual_case = !all_above_one;
    // t_k is the distance of 1/p_k from the endpoint that is replaced.
    std::vector<Rational> t;
    for (const auto& p : ps) t.push_back(out.dual_case ? 1 - p.reciprocal() : p.reciprocal());
    Rational tmax = *std::max_element(t.begin(), t.end());
    Rational theta = theta_override ? *theta_override : (1 + tmax) / 2;
    if (theta <= tmax || theta >= 1)
        throw Error(ErrorCode::invalid_parameter, "theta must lie in (" + opspace::to_string(tmax) + ", 1)");
    out.theta = theta;

    const Exponent near = out.dual_case ? Exponent::one() : Exponent::infinity();
    const Exponent far = out.dual_case ? Exponent::infinity() : Exponent::one();
    std::vector<SpaceExpr> start, near_f, far_f, tilde_f, result;
    for (std::size_t k = 0; k < ps.size(); ++k) {
        // 1/p_k = (1-theta)/near + theta/ptilde_k
        Exponent tilde = Exponent::from_reciprocal((ps[k].reciprocal() - (1 - theta) * near.reciprocal()) / theta);
        Exponent q = Exponent::from_reciprocal((1 - theta) * far.reciprocal() + theta * tilde.reciprocal());
        if (!q.is_strict()) throw Error(ErrorCode::out_of_range, "q_k left (1, inf)");
        out.qs.push_back(q);
        start.push_back(SpaceExpr::column(ps[k]));
        near_f.push_back(SpaceExpr::column(near));
        far_f.push_back(SpaceExpr::column(far));
        tilde_f.push_back(SpaceExpr::column(tilde));
        result.push_back(SpaceExpr::column(q));
    }
    bool multi = ps.size() > 1;
    std::string note = "theta=" + opspace::to_string(theta);
    out.trace = DerivationTrace(SpaceExpr::tensor(start));
    SpaceExpr top = SpaceExpr::tensor(tilde_f);
    out.trace.push(multi ? "KOUBA-INV" : "R1-INV", SpaceExpr::interp(SpaceExpr::tensor(near_f), top, theta),
                   EquivalenceLevel::completely_isometric,
                   multi ? detail::kouba_citation() : rule_info(RuleId::R1).citation, note);
    out.trace.push("HILB", SpaceExpr::interp(SpaceExpr::tensor(far_f), top, theta), EquivalenceLevel::isometric,
                   detail::hilbert_citation(), note);
    out.trace.push(multi ? "KOUBA" : "R1", SpaceExpr::tensor(result), EquivalenceLevel::completely_isometric,
                   multi ? detail::kouba_citation() : rule_info(RuleId::R1).citation, note);
    return out;
}

struct ConjugateInterp {
    Rational theta;
    Exponent r;
    Exponent s;
};

/// For 1 < p != q < inf finds theta in (0,1) and 1 < r, s < inf, r != 2, with
///   1/r  = (1-theta)/s + theta/p
///   1/r' = (1-theta)/s + theta/q.
/// theta starts at 1/2 and is halved until 0 < 1/s < 1.
inline ConjugateInterp solve_conjugate_interp(const Exponent& p, const Exponent& q) {
    if (!p.is_strict() || !q.is_strict())
        throw Error(ErrorCode::out_of_range, "solve_conjugate_interp needs 1 < p, q < inf");
    if (p == q) throw Error(ErrorCode::not_applicable, "p = q forces r = 2");
    const Rational& a = p.reciprocal();
    const Rational& b = q.reciprocal();
    Rational theta{1, 2};
    for (int iter = 0; iter < 256; ++iter, theta /= 2) {
        Rational inv_r = (1 + theta * (a - b)) / 2;
        Rational inv_s = (1 - theta * (a + b)) / (2 * (1 - theta));
        if (inv_s <= 0 || inv_s >= 1 || inv_r <= 0 || inv_r >= 1) continue;
        ConjugateInterp out{theta, Exponent::from_reciprocal(inv_r), Exponent::from_reciprocal(inv_s)};
        // exact back-substitution
        if (inv_r != (1 - theta) * inv_s + theta * a || 1 - inv_r != (1 - theta) * inv_s + theta * b ||
            inv_r * 2 == 1)
            throw Error(ErrorCode::not_applicable, "back-substitution failed");
        return out;
    }
    throw Error(ErrorCode::not_applicable, "no admissible theta found");
}

struct XnReduction {
    SpaceExpr expr;
    DerivationTrace trace;
};

/// X_{2n}(p, p') = (C_p (x) C_q)^{(x) 2n} rewritten as n nestings S_p[S_q[...]]
/// using C_p = R_q and C_q = R_p. Only conjugate pairs with p != 2 qualify.
inline XnReduction xn_reduce(const Exponent& p, const Exponent& q, unsigned n) {
    if (!p.is_strict() || q != p.conjugate() || p == Exponent::from_value(2))
        throw Error(ErrorCode::not_applicable, "xn_reduce needs a conjugate pair q = p' with p != 2");
    std::vector<SpaceExpr> flat;
    for (unsigned k = 0; k < 2 * n; ++k) {
        flat.push_back(SpaceExpr::column(p));
        flat.push_back(SpaceExpr::column(q));
    }
    // Outer nest of S_p[S_q[ . ]] around `hole`.
    auto wrap = [&](unsigned depth, const SpaceExpr& hole) {
        SpaceExpr e = hole;
        for (unsigned k = 0; k < depth; ++k) e = SpaceExpr::vector_schatten(p, SpaceExpr::vector_schatten(q, e));
        return e;
    };
    auto middle = [&](unsigned pairs) {
        std::vector<SpaceExpr> m;
        for (unsigned k = 0; k < pairs; ++k) {
            m.push_back(SpaceExpr::column(p));
            m.push_back(SpaceExpr::column(q));
        }
        return SpaceExpr::tensor(m);
    };
    XnReduction out;
    out.trace = DerivationTrace(SpaceExpr::tensor(flat));
    for (unsigned done = 0; done < n; ++done) {
        unsigned pairs = 2 * (n - done);  // C_p (x) C_q pairs in the current core
        SpaceExpr inner = middle(pairs - 2);
        SpaceExpr rows = SpaceExpr::tensor({SpaceExpr::column(p), SpaceExpr::column(q), inner, SpaceExpr::row(q),
                                            SpaceExpr::row(p)});
        out.trace.push("R4-INV", wrap(done, rows), EquivalenceLevel::completely_isometric, "C_p = R_q, C_q = R_p");
        out.trace.push("R5-INV", wrap(done + 1, inner), EquivalenceLevel::completely_isometric,
                       rule_info(RuleId::R5).citation);
    }
    out.expr = wrap(n, SpaceExpr::scalar());
    return out;
}

} // namespace opspace::calculus
