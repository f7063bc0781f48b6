#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "opspace/calculus/parser.hpp"
#include "opspace/calculus/rewrite.hpp"
#include "support/expr_gen.hpp"

using namespace opspace;
using namespace opspace::calculus;

namespace {

SpaceExpr P(const char* s) { return parse_expr(s); }
constexpr auto CI = EquivalenceLevel::completely_isometric;
constexpr auto ISO = EquivalenceLevel::isometric;

TEST(Parser, RoundTrip) {
    for (const char* s : {"C[inf]", "R[3/2]", "S[4]", "C[2] (x) C[2]", "I[1/3]{C[inf], C[1]}", "dual(C[4])",
                          "op(R[2] (x) C[5])", "Sp[3/2]{C[inf]}", "scalar", "Sp[2]{Sp[2]{scalar}}"}) {
        EXPECT_EQ(P(s).str(), s);
        EXPECT_EQ(P(P(s).str().c_str()), P(s));
    }
}

TEST(Parser, FlattensTensorsAndDropsScalars) {
    EXPECT_EQ(P("(C[2] (x) C[3]) (x) C[4]"), P("C[2] (x) (C[3] (x) C[4])"));
    EXPECT_EQ(P("(C[2] (x) C[3]) (x) C[4]").children().size(), 3u);
    EXPECT_EQ(P("scalar (x) C[2]"), P("C[2]"));
    EXPECT_EQ(P("  C[ 3/2 ]  (x)R[inf] ").str(), "C[3/2] (x) R[inf]");
}

TEST(Parser, ErrorsCarryPosition) {
    auto pos = [](const char* s) -> std::size_t {
        try {
            parse_expr(s);
        } catch (const ParseError& e) {
            return e.position();
        }
        return std::string::npos;
    };
    EXPECT_EQ(pos("C[2] (x)"), 8u);
    EXPECT_EQ(pos("C[1/2]"), 2u);
    EXPECT_EQ(pos("I[1]{C[2], C[3]}"), 2u);
    EXPECT_EQ(pos("Q[2]"), 0u);
    EXPECT_EQ(pos("C[2] C[3]"), 5u);
    EXPECT_NE(pos("I[1/2]{C[2] C[3]}"), std::string::npos);
}

TEST(Normalize, ColumnSquareAtBothLevels) {
    auto ci = normalize(P("C[inf] (x) C[inf]"), CI);
    EXPECT_EQ(ci.expr, P("C[inf]"));
    EXPECT_TRUE(ci.trace.uses_rule("R2"));
    EXPECT_EQ(ci.trace.level(), CI);

    auto iso = normalize(P("C[inf] (x) C[inf]"), ISO);
    EXPECT_EQ(iso.expr, P("S[2]"));
    EXPECT_TRUE(iso.trace.uses_rule("R3"));
    EXPECT_EQ(iso.trace.level(), ISO);
    EXPECT_EQ(banach_class(ci.expr), banach_class(iso.expr));
    EXPECT_EQ(banach_class(ci.expr).str(), "hilbert");
}

TEST(Normalize, VectorSchattenOverColumn) {
    auto n = normalize(P("Sp[3/2]{C[inf]}"), CI);
    EXPECT_EQ(n.expr, P("C[3/2] (x) C[inf] (x) C[3]"));
    ASSERT_EQ(n.trace.size(), 2u);
    EXPECT_EQ(n.trace.steps()[0].rule, "R5");
    EXPECT_EQ(n.trace.steps()[1].rule, "R4");
    EXPECT_TRUE(n.trace.is_chained());
}

TEST(Normalize, OppositeOfRow) {
    auto n = normalize(P("op(R[5/2])"), CI);
    EXPECT_EQ(n.expr, P("C[5/2]"));
    EXPECT_TRUE(n.trace.uses_rule("R6"));
    // op reverses products
    EXPECT_EQ(normalize(P("op(C[2] (x) C[inf])"), CI).expr, P("C[1] (x) C[2]"));
}

TEST(Normalize, IndividualRules) {
    EXPECT_EQ(normalize(P("I[1/3]{C[inf], C[1]}"), CI).expr, P("C[3]"));
    EXPECT_EQ(normalize(P("dual(C[4])"), CI).expr, P("C[4/3]"));
    EXPECT_EQ(normalize(P("R[4]"), CI).expr, P("C[4/3]"));
    EXPECT_EQ(normalize(P("C[3] (x) C[3] (x) C[3] (x) C[3]"), CI).expr, P("C[3]"));
    EXPECT_TRUE(normalize(P("C[3] (x) C[3] (x) C[3]"), CI).trace.uses_rule("R8"));
    // C_u (x) C_v -> S_{2/(1-1/v+1/u)}
    EXPECT_EQ(normalize(P("C[3] (x) C[5]"), ISO).expr, P("S[30/17]"));
    EXPECT_EQ(normalize(P("C[1] (x) C[inf]"), ISO).expr, P("S[1]"));
    EXPECT_EQ(normalize(P("C[inf] (x) C[1]"), ISO).expr, P("S[inf]"));
    EXPECT_EQ(normalize(P("I[1/2]{S[inf], S[1]}"), ISO).expr, P("S[2]"));
    // S_p[scalar] = C_p (x) R_p = S_p at the Banach level
    EXPECT_EQ(normalize(P("Sp[3]{scalar}"), ISO).expr, P("S[3]"));
}

TEST(Normalize, IsometricRulesNeedBanachContext) {
    // Inside a tensor product an isometry of one factor proves nothing.
    auto n = normalize(P("Sp[3]{C[2] (x) C[5]}"), ISO);
    EXPECT_FALSE(n.trace.uses_rule("R3"));
    EXPECT_EQ(n.expr, P("C[3] (x) C[2] (x) C[5] (x) C[3/2]"));
    // Interpolation endpoints are Banach contexts.
    EXPECT_EQ(normalize(P("I[1/5]{C[inf] (x) C[inf], C[inf] (x) C[1]}"), ISO).expr, P("S[5/2]"));
}

TEST(Normalize, RejectsWeakRulesAtStrongTarget) {
    std::vector<RuleId> order{RuleId::R3, RuleId::R1};
    EXPECT_THROW(normalize(P("C[2]"), CI, order), Error);
}

TEST(Normalize, NoRuleIsIdentity) {
    auto n = normalize(P("S[3] (x) dual(S[2])"), CI);
    EXPECT_EQ(n.expr, P("S[3] (x) dual(S[2])"));
    EXPECT_TRUE(n.trace.empty());
}

// ---- property tests -------------------------------------------------------

using opspace::testing::ExprGen;
using opspace::testing::shuffled_priorities;

TEST(NormalizeProperty, ConfluentUnderPriorityPermutations) {
    ExprGen gen(2024);
    for (int i = 0; i < 500; ++i) {
        SpaceExpr e = gen(3);
        for (auto target : {CI, ISO}) {
            SpaceExpr reference = normalize(e, target).expr;
            for (const auto& order : shuffled_priorities(target, gen.rng(), 5))
                ASSERT_EQ(normalize(e, target, order).expr, reference) << e << " at " << to_string(target);
        }
    }
}

TEST(NormalizeProperty, IdempotentAndChained) {
    ExprGen gen(99);
    for (int i = 0; i < 500; ++i) {
        SpaceExpr e = gen(3);
        for (auto target : {CI, ISO}) {
            auto once = normalize(e, target);
            auto twice = normalize(once.expr, target);
            ASSERT_EQ(twice.expr, once.expr) << e;
            EXPECT_TRUE(twice.trace.empty());
            EXPECT_TRUE(once.trace.is_chained());
            if (!once.trace.empty()) {
                EXPECT_EQ(once.trace.steps().front().before, e);
                EXPECT_EQ(once.trace.steps().back().after, once.expr);
            }
        }
    }
}

TEST(NormalizeProperty, LevelMonotonicity) {
    ExprGen gen(5);
    for (int i = 0; i < 300; ++i) {
        SpaceExpr e = gen(3);
        EXPECT_EQ(normalize(e, CI).trace.level(), CI);
        auto iso = normalize(e, ISO);
        bool weak = iso.trace.uses_rule("R3") || iso.trace.uses_rule("R7");
        EXPECT_EQ(iso.trace.level(), weak ? ISO : CI) << e;
    }
}

TEST(NormalizeProperty, ColumnSquareBanachConsistency) {
    for (int a = 0; a <= 12; ++a) {
        Exponent p = Exponent::from_reciprocal(Rational(a, 12));
        SpaceExpr e = SpaceExpr::tensor({SpaceExpr::column(p), SpaceExpr::column(p)});
        auto ci = normalize(e, CI);
        auto iso = normalize(e, ISO);
        EXPECT_EQ(ci.expr, SpaceExpr::column(p));
        EXPECT_EQ(iso.expr, SpaceExpr::schatten(Exponent::from_value(2)));
        EXPECT_EQ(banach_class(ci.expr), banach_class(iso.expr));
    }
}

} // namespace
