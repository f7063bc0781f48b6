#pragma once

#include <string>

#include "opspace/calculus/derivations.hpp"
#include "opspace/calculus/parser.hpp"
#include "opspace/calculus/rewrite.hpp"
#include "opspace/cli/suites.hpp"
#include "opspace/numlab/matrix_io.hpp"

namespace opspace::cli {

inline Json trace_json(const calculus::DerivationTrace& trace) {
    Json steps = Json::array();
    for (const auto& s : trace.steps()) {
        Json j{{"rule", s.rule},
               {"before", s.before.str()},
               {"after", s.after.str()},
               {"level", calculus::to_string(s.level)},
               {"citation", s.citation}};
        if (!s.note.empty()) j["note"] = s.note;
        if (s.embedding) j["embedding"] = true;
        steps.push_back(std::move(j));
    }
    return steps;
}

inline Json to_ordered(const nlohmann::json& j) { return Json::parse(j.dump()); }

inline Report normalize_command(const std::string& text, calculus::EquivalenceLevel level) {
    auto expr = calculus::parse_expr(text);
    auto n = calculus::normalize(expr, level);
    Report rep("normalize", {{"expression", text}, {"level", calculus::to_string(level)}});
    Record r;
    r.key = "normalize";
    r.inputs = {{"expression", expr.str()}};
    r.value = static_cast<double>(n.trace.size());
    r.kind = "exact";
    r.pass = n.trace.is_chained();
    r.claim = "rewriting preserves the space up to the reported equivalence level";
    r.details = {{"canonical", n.expr.str()},
                 {"level", calculus::to_string(n.trace.level())},
                 {"banach_class", calculus::banach_class(n.expr).str()},
                 {"trace", trace_json(n.trace)}};
    rep.add(std::move(r));
    return rep;
}

inline Report embed_command(const Exponent& p) {
    auto ds = calculus::derive_embedding(p);
    Report rep("embed", {{"p", p.str()}});
    for (const auto& d : ds) {
        Record r;
        r.key = d.via_opposite ? "opposite" : "direct";
        r.inputs = {{"p", p.str()}};
        r.value = d.u.to_double();
        r.kind = "exact";
        r.pass = d.u.is_strict() && d.v.is_strict();
        r.claim = "S_p[C] embeds isometrically in S_u[S_v] with 1 < u, v < inf";
        r.details = {{"u", d.u.str()},
                     {"v", d.v.str()},
                     {"theta", to_string(d.theta)},
                     {"q", d.q.str()},
                     {"r", d.r.str()},
                     {"trace", trace_json(d.trace)}};
        rep.add(std::move(r));
    }
    return rep;
}

struct EstimateRequest {
    std::string op = "triangular-upper";  // or schur, riesz, triangular-lower, kp
    Exponent p = Exponent::from_value(4);
    int size = 4;
    std::optional<std::string> signs;
    int degree = 4;
    bool enumerate = true;
    long samples = 256;
};

inline Report estimate_command(const EstimateRequest& req, std::uint64_t seed, int restarts) {
    martingale::AscentOptions opt;
    opt.seed = derive_seed(seed, 0xe5);
    opt.restarts = restarts;
    Json config{{"operator", req.op}, {"p", req.p.str()}, {"size", req.size}, {"seed", seed}, {"restarts", restarts}};
    Record r;
    r.inputs = config;
    r.kind = "lower";
    if (req.op == "kp") {
        config["enumerate"] = req.enumerate;
        auto k = martingale::estimate_Kp(req.p, req.size, req.enumerate, req.samples, opt);
        r.key = "kp";
        r.value = k.estimate.value;
        r.claim = "K_p(S_p^N) is at least the norm of any sign transform T_eps";
        r.details = {{"pattern", k.pattern.str()}, {"patterns", k.patterns}, {"sampled", k.sampled},
                     {"witness", to_ordered(numlab::matrix_to_json(k.best.witness))}};
    } else {
        martingale::OperatorSpec spec{martingale::parse_operator(req.op), std::nullopt, req.degree};
        if (req.signs) spec.signs = martingale::SignPattern::parse(*req.signs);
        if (spec.kind == martingale::OperatorKind::schur && !spec.signs)
            throw Error(ErrorCode::invalid_parameter, "schur needs --signs");
        auto e = martingale::estimate_operator_norm(spec, req.p, req.size, opt);
        r.key = req.op;
        r.value = e.estimate.value;
        r.claim = "the operator norm is at least the ratio attained by the witness";
        Json details{{"iterations", e.estimate.iterations}, {"converged", e.estimate.converged}};
        if (spec.kind == martingale::OperatorKind::riesz) {
            Json coeffs = Json::array();
            for (const auto& [n, x] : e.witness_poly.coefficients())
                coeffs.push_back({n, to_ordered(numlab::matrix_to_json(x))});
            details["witness"] = coeffs;
        } else {
            details["witness"] = to_ordered(numlab::matrix_to_json(e.witness));
        }
        r.details = details;
    }
    r.pass = std::isfinite(r.value) && r.value >= 1.0 - 1e-9;
    r.tolerance = 1e-9;
    Report rep("estimate", config);
    rep.add(std::move(r));
    return rep;
}

} // namespace opspace::cli
