#pragma once

#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opspace/cli/report.hpp"
#include "opspace/martingale/operator_norm.hpp"
#include "opspace/martingale/umd.hpp"
#include "opspace/numlab/interp.hpp"
#include "opspace/numlab/pair_identity.hpp"
#include "opspace/regions/region.hpp"

namespace opspace::cli {

/// Parameters shared by the verification suites. Empty lists mean "suite default".
struct SuiteConfig {
    std::uint64_t seed = 20240601;
    int restarts = 32;
    std::optional<double> tol;
    std::vector<int> sizes;        // pair-identity
    std::optional<int> samples;
    std::vector<std::pair<Exponent, Exponent>> pairs;
    std::vector<int> n;            // averaging, constants, riesz
    std::vector<Exponent> p;       // constants, riesz; first entry for umd-growth and region
    std::optional<Exponent> q;     // umd-growth, region
    double delta = 0.05;           // constants
    std::vector<Rational> thetas;  // interp
    int size = 5;                  // interp
    int degree = 4;                // riesz
    int width = 2, depth = 6, nesting = 3;  // umd-growth
    std::string set = "L";         // region

    Json to_json() const {
        Json j;
        j["seed"] = seed;
        j["restarts"] = restarts;
        j["tol"] = tol ? Json(*tol) : Json(nullptr);
        j["sizes"] = sizes;
        j["samples"] = samples ? Json(*samples) : Json(nullptr);
        Json pj = Json::array();
        for (const auto& [u, v] : pairs) pj.push_back({u.str(), v.str()});
        j["pairs"] = pj;
        j["n"] = n;
        Json ps = Json::array();
        for (const auto& e : p) ps.push_back(e.str());
        j["p"] = ps;
        j["q"] = q ? Json(q->str()) : Json(nullptr);
        j["delta"] = delta;
        Json th = Json::array();
        for (const auto& t : thetas) th.push_back(to_string(t));
        j["thetas"] = th;
        j["size"] = size;
        j["degree"] = degree;
        j["width"] = width;
        j["depth"] = depth;
        j["nesting"] = nesting;
        j["set"] = set;
        return j;
    }
};

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"pair-identity", "averaging", "constants", "interp",
                                                "riesz", "umd-growth", "region"};
    return names;
}

namespace detail {

inline std::string pad(long v, int width = 3) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%0*ld", width, v);
    return buf;
}

inline const char* kind_name(numlab::EstimateKind k) { return numlab::to_string(k); }

inline Exponent E(const char* s) { return Exponent::parse(s); }

inline void pair_identity(Report& rep, const SuiteConfig& c) {
    auto pairs = c.pairs;
    if (pairs.empty())
        pairs = {{E("inf"), E("inf")}, {E("1"), E("inf")}, {E("inf"), E("1")}, {E("2"), E("2")}, {E("4"), E("4/3")}, {E("3"), E("5")}};
    auto sizes = c.sizes.empty() ? std::vector<int>{4} : c.sizes;
    numlab::PairIdentityOptions opt;
    opt.tolerance = c.tol.value_or(0.005);
    opt.descent.restarts = c.restarts;
    for (int size : sizes) {
        auto recs = numlab::verify_pair_identity(pairs, c.samples.value_or(20), size, derive_seed(c.seed, 0x1d, size), opt);
        for (const auto& r : recs) {
            Record out;
            out.key = "u=" + r.u.str() + ",v=" + r.v.str() + "/size=" + pad(r.size) + "/sample=" + pad(r.sample);
            out.inputs = {{"u", r.u.str()}, {"v", r.v.str()}, {"size", r.size}, {"sample", r.sample}, {"target_exponent", r.target.str()}};
            out.oracle = r.oracle;
            out.value = r.upper;
            out.kind = "upper";
            out.relative_gap = r.gap;
            out.tolerance = opt.tolerance;
            out.pass = r.pass;
            out.claim = "C_u (x)_h C_v = S_{2/(1-1/v+1/u)} isometrically";
            out.details = {{"certificate_gap", r.certificate_gap},
                           {"certificate_reconstruction", r.reconstruction},
                           {"factor_residual", r.residual},
                           {"iterations", r.iterations},
                           {"converged", r.converged}};
            rep.add(std::move(out));
        }
    }
}

inline void averaging(Report& rep, const SuiteConfig& c) {
    std::vector<int> ns = c.n;
    if (ns.empty())
        for (int k = 2; k <= 10; ++k) ns.push_back(k);
    const double tol = c.tol.value_or(1e-12);
    const int samples = c.samples.value_or(3);
    for (int n : ns) {
        if (n < 1) throw Error(ErrorCode::invalid_parameter, "size must be positive");
        if (n > 24) throw Error(ErrorCode::budget_exceeded, "averaging size " + std::to_string(n) + " exceeds cap 24");
        for (int s = 0; s < samples; ++s) {
            Rng rng = make_rng(c.seed, 0xa5 + static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(s));
            numlab::Matrix x = numlab::random_complex(n, n, rng);
            const long draws = 4096;
            auto chk = martingale::sign_average_check(x, 12, draws, derive_seed(c.seed, 0xa6, static_cast<std::uint64_t>(n * 1000 + s)));
            Record out;
            out.key = "n=" + pad(n) + "/sample=" + pad(s);
            out.inputs = {{"n", n}, {"sample", s}};
            out.oracle = 0.0;
            out.value = chk.deviation;
            out.kind = chk.approximate ? "upper" : "exact";
            // sampled averages carry Monte Carlo error of order max|x_ij| / sqrt(draws)
            out.tolerance = chk.approximate ? 6.0 * x.cwiseAbs().maxCoeff() / std::sqrt(static_cast<double>(draws)) : tol;
            out.pass = chk.deviation < out.tolerance;
            out.claim = "average over signs of D_eps T_eps(x) is the lower triangular part of x";
            out.details = {{"patterns", chk.patterns}, {"approximate", chk.approximate}};
            rep.add(std::move(out));
        }
    }
}

inline Json estimate_json(const numlab::NormEstimate& e) {
    return {{"value", e.value}, {"kind", kind_name(e.kind)}, {"restarts", e.restarts},
            {"iterations", e.iterations}, {"converged", e.converged}};
}

inline martingale::AscentOptions ascent(const SuiteConfig& c, std::uint64_t stream) {
    martingale::AscentOptions o;
    o.restarts = c.restarts;
    o.seed = derive_seed(c.seed, stream);
    return o;
}

inline void constants(Report& rep, const SuiteConfig& c) {
    auto ps = c.p.empty() ? std::vector<Exponent>{E("4/3"), E("4")} : c.p;
    auto ns = c.n.empty() ? std::vector<int>{4, 6} : c.n;
    for (const auto& p : ps)
        for (int n : ns) {
            auto r = martingale::verify_constant_bounds(p, n, c.delta, ascent(c, 0xc0 + static_cast<std::uint64_t>(n)));
            for (std::size_t i = 0; i < r.checks.size(); ++i) {
                const auto& chk = r.checks[i];
                Record out;
                out.key = "p=" + p.str() + "/n=" + pad(n) + "/check=" + std::to_string(i + 1);
                out.inputs = {{"p", p.str()}, {"n", n}, {"delta", c.delta}, {"inequality", chk.name}};
                out.value = chk.lhs;
                out.kind = "lower";
                out.tolerance = c.delta;
                out.pass = chk.pass;
                out.claim = i == 0 ? "||T|| <= K_p" : i == 1 ? "K_p <= 2||T|| + 1" : "||T|| <= (K_p + 1)/2";
                out.details = {{"bound", chk.rhs},
                               {"triangular", estimate_json(r.triangular)},
                               {"kp", estimate_json(r.kp.estimate)},
                               {"kp_pattern", r.kp.pattern.str()},
                               {"caveat", r.caveat}};
                rep.add(std::move(out));
            }
        }
}

inline void interp(Report& rep, const SuiteConfig& c) {
    auto thetas = c.thetas.empty() ? std::vector<Rational>{Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(2, 3)} : c.thetas;
    const double tol = c.tol.value_or(1e-8);
    const int samples = c.samples.value_or(3);
    if (c.size < 1 || c.size > 64) throw Error(ErrorCode::budget_exceeded, "interp size must lie in 1..64");
    for (std::size_t t = 0; t < thetas.size(); ++t)
        for (int s = 0; s < samples; ++s) {
            Rng rng = make_rng(c.seed, 0x17 + t, static_cast<std::uint64_t>(s));
            numlab::Matrix x = numlab::random_complex(c.size, c.size, rng);
            auto b = numlab::interp_upper_lower(x, thetas[t]);
            double target = numlab::schatten_norm(x, 1.0 / to_double(thetas[t]));
            Record out;
            out.key = "theta=" + to_string(thetas[t]) + "/sample=" + pad(s);
            out.inputs = {{"theta", to_string(thetas[t])}, {"size", c.size}, {"sample", s}};
            out.oracle = target;
            out.value = b.upper.value;
            out.kind = "upper";
            out.relative_gap = b.width() / target;
            out.tolerance = tol;
            out.pass = b.width() <= tol * target && b.lower.value <= target * (1 + 1e-12) && b.upper.value >= target * (1 - 1e-12);
            out.claim = "S_p = (S_inf, S_1)_{1/p}";
            out.details = {{"lower", b.lower.value}, {"upper", b.upper.value}};
            rep.add(std::move(out));
        }
}

inline void riesz(Report& rep, const SuiteConfig& c) {
    auto ps = c.p.empty() ? std::vector<Exponent>{E("2"), E("4/3"), E("4")} : c.p;
    auto ns = c.n.empty() ? std::vector<int>{2} : c.n;
    for (const auto& p : ps)
        for (int n : ns) {
            martingale::OperatorSpec op{martingale::OperatorKind::riesz, std::nullopt, c.degree};
            auto e = martingale::estimate_operator_norm(op, p, n, ascent(c, 0x3e));
            Record out;
            out.key = "p=" + p.str() + "/n=" + pad(n);
            out.inputs = {{"p", p.str()}, {"n", n}, {"degree", c.degree}};
            out.value = e.estimate.value;
            out.kind = "lower";
            if (p == E("2")) {
                out.oracle = 1.0;
                out.relative_gap = e.estimate.value - 1.0;
                out.tolerance = c.tol.value_or(1e-3);
                out.pass = std::abs(e.estimate.value - 1.0) <= out.tolerance;
                out.claim = "the Riesz projection is an orthogonal projection on L_2(S_2)";
            } else {
                // a projection has norm at least one; nothing sharper is known here
                out.tolerance = c.tol.value_or(1e-6);
                out.pass = std::isfinite(e.estimate.value) && e.estimate.value >= 1.0 - out.tolerance;
                out.claim = "the Riesz projection is bounded on L_p(S_p), 1 < p < inf";
            }
            out.details = {{"estimate", estimate_json(e.estimate)}, {"nodes", martingale::quadrature_nodes(c.degree)}};
            rep.add(std::move(out));
        }
}

inline void umd_growth(Report& rep, const SuiteConfig& c) {
    martingale::MixedNormSpace space{c.p.empty() ? E("3") : c.p.front(), c.q.value_or(E("3/2")), c.width, 0};
    martingale::UmdOptions o;
    o.restarts = std::max(1, c.restarts / 4);
    o.seed = derive_seed(c.seed, 0x0d);
    auto seq = martingale::umd_growth(space, c.nesting, c.depth, o);
    const double tol = c.tol.value_or(1e-3);
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const auto& e = seq[i];
        Record out;
        out.key = "n=" + pad(e.nesting);
        out.inputs = {{"p", space.p.str()}, {"q", space.q.str()}, {"width", c.width}, {"depth", c.depth}, {"nesting", e.nesting}};
        out.value = e.value;
        out.kind = "lower";
        out.tolerance = tol;
        if (i == 0) {
            out.oracle = 1.0;
            out.relative_gap = e.value - 1.0;
            out.pass = std::abs(e.value - 1.0) <= tol;
            out.claim = "beta_2 of a Hilbert space is 1";
        } else {
            out.pass = e.value >= seq[i - 1].value * (1 - 1e-12);
            out.claim = "E_{n-1} embeds isometrically in E_n, so lower bounds do not decrease";
        }
        out.details = {{"signs", e.signs.str()}, {"iterations", e.meta.iterations}, {"restarts", e.meta.restarts}};
        rep.add(std::move(out));
    }
    Record g;
    g.key = "z-growth";
    g.inputs = {{"nesting", c.nesting}};
    g.value = seq.back().value;
    g.kind = "lower";
    g.oracle = 1.0;
    g.relative_gap = seq.back().value - 1.0;
    g.tolerance = tol;
    g.pass = c.nesting == 0 || seq.back().value > 1.0 + tol;
    g.claim = "beta_2(E_n) grows with the nesting depth";
    rep.add(std::move(g));
}

inline Json point_json(const regions::ParamPoint& p) { return {to_string(p.x), to_string(p.y)}; }

inline Json certificate_json(const regions::Certificate& c) {
    Json pts = Json::array(), ws = Json::array();
    for (const auto& q : c.points) pts.push_back(point_json(q));
    for (const auto& w : c.weights) ws.push_back(to_string(w));
    return {{"points", pts}, {"weights", ws}};
}

// L and S by their closed-form inequalities, written without the hull machinery.
inline bool closed_form_member(const std::string& set, const regions::ParamPoint& p) {
    auto abs = [](const Rational& r) { return r < 0 ? Rational(-r) : r; };
    if (set == "S") return p.x > 0 && p.x < 1 && p.y > 0 && p.y < 1;
    return abs(2 * p.x - 1) + 2 * abs(p.y - p.x) < 1;
}

inline void region(Report& rep, const SuiteConfig& c) {
    auto reg = regions::build_region(c.set);
    if (!c.p.empty() && c.q) {
        regions::ParamPoint pt{c.p.front().reciprocal(), c.q->reciprocal()};
        auto verdict = regions::query(reg, pt);
        auto cert = regions::family_certificate(reg, pt);
        Record out;
        out.key = "set=" + c.set + "/p=" + c.p.front().str() + ",q=" + c.q->str();
        out.inputs = {{"set", c.set}, {"p", c.p.front().str()}, {"q", c.q->str()}, {"point", point_json(pt)}};
        out.value = verdict == regions::Membership::yes ? 1.0 : 0.0;
        out.kind = "exact";
        out.pass = verdict != regions::Membership::yes || cert.has_value();
        out.claim = c.set == "S" ? "C_p has OUMD_q on the open square" : "S_p has OUMD_q when (1/p, 1/q) lies in L";
        out.details = {{"verdict", regions::to_string(verdict)}, {"certificate", cert ? certificate_json(*cert) : Json(nullptr)}};
        rep.add(std::move(out));
        return;
    }
    if (reg.lower_bound_only) throw Error(ErrorCode::invalid_parameter, "a sweep needs a region with a closed form (S or L)");
    const int samples = c.samples.value_or(1000);
    Rng rng = make_rng(c.seed, 0x4e);
    int mismatches = 0, inside = 0;
    for (int s = 0; s < samples; ++s) {
        std::uniform_int_distribution<int> den(1, 40);
        int dx = den(rng), dy = den(rng);
        std::uniform_int_distribution<int> nx(-1, dx + 1), ny(-1, dy + 1);
        regions::ParamPoint pt{Rational(nx(rng), dx), Rational(ny(rng), dy)};
        bool a = regions::contains(reg, pt);
        inside += a;
        mismatches += a != closed_form_member(c.set, pt);
    }
    Record out;
    out.key = "set=" + c.set + "/sweep";
    out.inputs = {{"set", c.set}, {"samples", samples}};
    out.oracle = 0.0;
    out.value = mismatches;
    out.kind = "exact";
    out.pass = mismatches == 0;
    out.claim = "hull membership agrees with the closed-form description";
    out.details = {{"inside", inside}};
    rep.add(std::move(out));
}

} // namespace detail

inline Report run_suite(const std::string& name, const SuiteConfig& config) {
    auto start = std::chrono::steady_clock::now();
    Report rep("verify " + name, config.to_json());
    if (name == "pair-identity") detail::pair_identity(rep, config);
    else if (name == "averaging") detail::averaging(rep, config);
    else if (name == "constants") detail::constants(rep, config);
    else if (name == "interp") detail::interp(rep, config);
    else if (name == "riesz") detail::riesz(rep, config);
    else if (name == "umd-growth") detail::umd_growth(rep, config);
    else if (name == "region") detail::region(rep, config);
    else throw Error(ErrorCode::invalid_parameter, "unknown suite '" + name + "'");
    rep.set_wall_clock(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    return rep;
}

} // namespace opspace::cli
