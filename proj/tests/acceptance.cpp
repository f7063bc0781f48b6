// Acceptance gate: one PASS/FAIL line per criterion. Tolerances are fixed here.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "opspace/calculus/derivations.hpp"
#include "opspace/cli/suites.hpp"
#include "support/expr_gen.hpp"

using namespace opspace;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::uint64_t kSeed = 20240601;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

Exponent E(const char* s) { return Exponent::parse(s); }

struct Outcome {
    bool pass;
    std::string detail;
};

Outcome pair_identity() {
    const double tol = 0.005, cert_tol = 1e-10, budget_s = 300;
    auto t0 = Clock::now();
    std::vector<std::pair<Exponent, Exponent>> grid{{E("inf"), E("inf")}, {E("1"), E("inf")}, {E("inf"), E("1")},
                                                    {E("2"), E("2")},     {E("4"), E("4/3")}, {E("3"), E("5")}};
    numlab::PairIdentityOptions opt;
    opt.tolerance = tol;
    opt.certificate_tolerance = cert_tol;
    opt.descent.restarts = 32;
    auto recs = numlab::verify_pair_identity(grid, 20, 4, kSeed, opt);
    bool ok = recs.size() == 120;
    double worst = 0, worst_cert = 0;
    for (const auto& r : recs) {
        ok = ok && r.pass;
        worst = std::max(worst, r.gap);
        worst_cert = std::max(worst_cert, r.certificate_gap);
    }
    double t = seconds_since(t0);
    ok = ok && t <= budget_s;
    char buf[160];
    std::snprintf(buf, sizeof buf, "120 cases, worst gap %.2e (tol %.3f), worst certificate gap %.1e, %.0f s", worst,
                  tol, worst_cert, t);
    return {ok, buf};
}

Outcome embedding() {
    bool ok = true;
    auto d = calculus::derive_embedding(E("3/2"));
    ok = ok && d.size() == 1 && d[0].u == E("2") && d[0].v == E("6/5");
    d = calculus::derive_embedding(E("4"));
    ok = ok && d.size() == 1 && d[0].u == E("8/3") && d[0].v == E("8");
    d = calculus::derive_embedding(E("2"));
    ok = ok && d.size() == 2 && d[0].u == E("4") && d[0].v == E("4/3") && d[1].u == E("4/3") && d[1].v == E("4");
    // golden proof parameters at p = 2
    bool golden = false;
    for (const auto& s : d[0].trace.steps())
        golden = golden || (s.rule == "KOUBA-INV" && s.note == "theta=3/4, q=3/2, r=3/2");
    ok = ok && golden && d[0].theta == Rational(3, 4) && d[0].q == E("3/2") && d[0].r == E("3/2");
    // 100 distinct rationals p = 1 + k/17 in (1, 7)
    int swept = 0;
    for (int k = 1; k <= 100; ++k, ++swept)
        for (const auto& e : calculus::derive_embedding(Exponent::from_value(1 + Rational(k, 17))))
            ok = ok && e.u.is_strict() && e.v.is_strict();
    return {ok && swept == 100, "exact (u, v) at p = 3/2, 4, 2; theta = 3/4, q = r = 3/2; 100 exponents swept"};
}

Outcome averaging() {
    const double tol = 1e-12;
    bool ok = true;
    double worst = 0;
    for (int n = 1; n <= 10; ++n)
        for (int s = 0; s < 3; ++s) {
            Rng rng = make_rng(kSeed, 0xa5 + static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(s));
            auto c = martingale::sign_average_check(numlab::random_complex(n, n, rng), 12);
            ok = ok && !c.approximate && c.patterns == (1L << n) && c.deviation < tol;
            worst = std::max(worst, c.deviation);
        }
    char buf[120];
    std::snprintf(buf, sizeof buf, "N = 1..10, 3 matrices each, full enumeration, max deviation %.1e", worst);
    return {ok, buf};
}

Outcome hilbert() {
    const double tol_matrix = 1e-6, tol_riesz = 1e-3;
    martingale::AscentOptions opt;
    opt.seed = kSeed;
    const Exponent two = E("2");
    double t = 0;
    for (auto k : {martingale::OperatorKind::triangular_upper, martingale::OperatorKind::triangular_lower})
        t = std::max(t, martingale::estimate_operator_norm({k, std::nullopt, 0}, two, 4, opt).estimate.value);
    double kp = martingale::estimate_Kp(two, 4, true, 0, opt).estimate.value;
    double riesz = martingale::estimate_operator_norm({martingale::OperatorKind::riesz, std::nullopt, 4}, two, 2, opt)
                       .estimate.value;
    bool ok = std::abs(t - 1) <= tol_matrix && std::abs(kp - 1) <= tol_matrix && std::abs(riesz - 1) <= tol_riesz;
    char buf[160];
    std::snprintf(buf, sizeof buf, "p = 2: triangular %.9f, K_2 %.9f, Riesz %.6f", t, kp, riesz);
    return {ok, buf};
}

Outcome constants() {
    const double delta = 0.05;
    bool ok = true;
    std::string detail;
    for (const char* p : {"4/3", "4"})
        for (int n : {4, 6}) {
            martingale::AscentOptions opt;
            opt.restarts = 32;
            opt.seed = derive_seed(kSeed, 0xc0 + static_cast<std::uint64_t>(n));
            auto r = martingale::verify_constant_bounds(E(p), n, delta, opt);
            ok = ok && r.pass() && r.checks.size() == 3;
            char buf[96];
            std::snprintf(buf, sizeof buf, "%sp=%s N=%d T=%.4f K=%.4f", detail.empty() ? "" : "; ", p, n,
                          r.triangular.value, r.kp.estimate.value);
            detail += buf;
        }
    return {ok, detail};
}

Outcome interp() {
    const double width_tol = 1e-8;
    bool ok = true;
    double worst = 0;
    for (auto theta : {Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(2, 3)})
        for (int s = 0; s < 5; ++s) {
            Rng rng = make_rng(kSeed, 0x17, static_cast<std::uint64_t>(s) + 100 * static_cast<std::uint64_t>(to_double(theta) * 12));
            numlab::Matrix x = numlab::random_complex(5, 5, rng);
            auto b = numlab::interp_upper_lower(x, theta);
            double target = numlab::schatten_norm(x, 1.0 / to_double(theta));
            double rel = 1e-12 * target;
            ok = ok && b.lower.value <= target + rel && b.upper.value >= target - rel && b.width() <= width_tol;
            worst = std::max(worst, b.width());
        }
    char buf[120];
    std::snprintf(buf, sizeof buf, "4 thetas x 5 matrices, max width %.1e", worst);
    return {ok, buf};
}

Outcome umd_growth() {
    const double tol = 1e-3, budget_s = 600;
    auto t0 = Clock::now();
    martingale::MixedNormSpace space{E("3"), E("3/2"), 2, 0};
    martingale::UmdOptions opt;
    opt.seed = kSeed;
    auto seq = martingale::umd_growth(space, 3, 6, opt);
    bool ok = seq.size() == 4 && std::abs(seq[0].value - 1) <= tol && seq.back().value > 1 + tol;
    for (std::size_t i = 1; i < seq.size(); ++i) ok = ok && seq[i].value >= seq[i - 1].value;
    double t = seconds_since(t0);
    ok = ok && t <= budget_s;
    std::string detail = "lower bounds";
    for (const auto& e : seq) detail += " " + std::to_string(e.value);
    return {ok, detail + ", " + std::to_string(static_cast<int>(t)) + " s"};
}

Outcome symbolic() {
    using calculus::EquivalenceLevel;
    bool ok = true;
    testing::ExprGen gen(2024);
    for (int i = 0; i < 500 && ok; ++i) {
        auto e = gen(3);
        for (auto target : {EquivalenceLevel::completely_isometric, EquivalenceLevel::isometric}) {
            auto ref = calculus::normalize(e, target);
            ok = ok && calculus::normalize(ref.expr, target).expr == ref.expr;
            for (const auto& order : testing::shuffled_priorities(target, gen.rng(), 5))
                ok = ok && calculus::normalize(e, target, order).expr == ref.expr;
        }
    }
    for (int a = 0; a <= 12; ++a) {
        auto p = Exponent::from_reciprocal(Rational(a, 12));
        auto e = calculus::SpaceExpr::tensor({calculus::SpaceExpr::column(p), calculus::SpaceExpr::column(p)});
        auto ci = calculus::normalize(e, EquivalenceLevel::completely_isometric);
        auto iso = calculus::normalize(e, EquivalenceLevel::isometric);
        ok = ok && ci.trace.uses_rule("R2") && iso.trace.uses_rule("R3") &&
             calculus::banach_class(ci.expr) == calculus::banach_class(iso.expr);
    }
    return {ok, "500 expressions x 5 priority orders at both levels, idempotent, C_p (x) C_p classes agree"};
}

// L by its four supporting half-planes: y > 0, y < 1, y < 2x, y > 2x - 1.
bool in_L(const Rational& x, const Rational& y) { return y > 0 && y < 1 && y < 2 * x && y > 2 * x - 1; }

Outcome regions_check() {
    auto L = regions::build_region("L");
    Rng rng = make_rng(kSeed, 0x4e);
    int agree = 0;
    for (int s = 0; s < 1000; ++s) {
        std::uniform_int_distribution<int> den(1, 60);
        int dx = den(rng), dy = den(rng);
        std::uniform_int_distribution<int> nx(-2, dx + 2), ny(-2, dy + 2);
        Rational x(nx(rng), dx), y(ny(rng), dy);
        agree += regions::contains(L, {x, y}) == in_L(x, y);
    }
    bool ok = agree == 1000;
    for (auto [x, y] : {std::pair{Rational(0), Rational(0)}, {Rational(1, 2), Rational(0)}, {Rational(1), Rational(1)},
                        {Rational(1, 2), Rational(1)}})
        ok = ok && !regions::contains(L, {x, y});
    ok = ok && regions::contains(L, {Rational(1, 2), Rational(1, 2)}) && !regions::contains(L, {Rational(1, 4), Rational(1, 2)});
    return {ok, std::to_string(agree) + "/1000 random points agree; vertices and (1/4,1/2) excluded, (1/2,1/2) included"};
}

Outcome reproducibility() {
    bool ok = true;
    int suites = 0;
    for (const auto& name : cli::suite_names()) {
        cli::SuiteConfig c;
        c.seed = 7;
        c.restarts = 4;
        c.sizes = {3};
        c.samples = 2;
        c.n = {3};
        c.nesting = 1;
        c.depth = 4;
        if (name == "region") c.samples = 200;
        auto a = cli::run_suite(name, c).body().dump();
        auto b = cli::run_suite(name, c).body().dump();
        ok = ok && a == b;
        ++suites;
    }
    return {ok, std::to_string(suites) + " suites rerun with seed 7, bodies byte-identical"};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"pair identity C_u (x)_h C_v = S_p", pair_identity},
        {"embedding derivation", embedding},
        {"sign averaging identity", averaging},
        {"Hilbert case exactness", hilbert},
        {"constant sandwich", constants},
        {"interpolation bracket", interp},
        {"UMD lower-bound growth", umd_growth},
        {"symbolic soundness", symbolic},
        {"region L membership", regions_check},
        {"reproducibility", reproducibility},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
