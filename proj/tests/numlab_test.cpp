#include <gtest/gtest.h>

#include <cmath>

#include "opspace/numlab/haagerup.hpp"
#include "opspace/numlab/interp.hpp"
#include "opspace/numlab/matrix_io.hpp"
#include "opspace/numlab/pair_identity.hpp"
#include "opspace/numlab/vector_schatten.hpp"

using namespace opspace;
using namespace opspace::numlab;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

Exponent E(const char* s) { return Exponent::parse(s); }

Matrix diag(std::initializer_list<double> d) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(d.size()));
    Eigen::Index i = 0;
    for (double x : d) v[i++] = x;
    return v.asDiagonal();
}

Matrix random_unitary(Eigen::Index n, Rng& rng) {
    Eigen::HouseholderQR<Matrix> qr(random_complex(n, n, rng));
    return qr.householderQ() * Matrix::Identity(n, n);
}

DescentOptions quick(int restarts = 8) {
    DescentOptions o;
    o.restarts = restarts;
    return o;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

TEST(Schatten, Examples) {
    EXPECT_NEAR(schatten_norm(diag({3, 4}), E("2")).value, 5.0, 1e-14);
    EXPECT_NEAR(schatten_norm(diag({2, 1}), E("1")).value, 3.0, 1e-14);
    EXPECT_NEAR(schatten_norm(Matrix::Identity(3, 3), E("inf")).value, 1.0, 1e-14);
    EXPECT_EQ(schatten_norm(diag({2, 1}), E("1")).kind, EstimateKind::exact);
}

TEST(Schatten, MonotoneInP) {
    Rng rng(1);
    const double ps[] = {1.0, 1.25, 4.0 / 3, 1.5, 2.0, 3.0, 4.0, 10.0, 100.0, kInf};
    for (int t = 0; t < 50; ++t) {
        Matrix x = random_complex(4, 3, rng);
        double prev = kInf;
        for (double p : ps) {
            double v = schatten_norm(x, p);
            EXPECT_LE(v, prev * (1 + 1e-12));
            prev = v;
        }
    }
}

TEST(Schatten, UnitaryTransposeAndScalingInvariance) {
    Rng rng(2);
    for (int t = 0; t < 50; ++t) {
        Matrix x = random_complex(4, 4, rng);
        Matrix u = random_unitary(4, rng), w = random_unitary(4, rng);
        Complex z(std::normal_distribution<double>()(rng), std::normal_distribution<double>()(rng));
        for (double p : {1.0, 1.5, 2.0, 3.0, kInf}) {
            double v = schatten_norm(x, p);
            EXPECT_LT(rel(schatten_norm(u * x * w, p), v), 1e-12);
            EXPECT_LT(rel(schatten_norm(x.transpose(), p), v), 1e-12);
            EXPECT_LT(rel(schatten_norm(x.adjoint(), p), v), 1e-12);
            EXPECT_LT(rel(schatten_norm(x.conjugate(), p), v), 1e-12);
            EXPECT_LT(rel(schatten_norm(z * x, p), std::abs(z) * v), 1e-12);
        }
    }
}

TEST(Schatten, RejectsExponentBelowOne) { EXPECT_THROW(schatten_norm(diag({1}), 0.5), Error); }

TEST(Schatten, HolderDualityPairing) {
    Rng rng(3);
    for (int t = 0; t < 40; ++t) {
        Matrix x = random_complex(5, 3, rng);
        for (const char* ps : {"1", "4/3", "2", "3", "inf"}) {
            Exponent p = E(ps);
            Matrix y = holder_dual(x, p);
            double norm = schatten_norm(x, p).value;
            EXPECT_NEAR(schatten_norm(y, p.conjugate()).value, 1.0, 1e-10);
            EXPECT_LT(rel(std::abs((y.adjoint() * x).trace()), norm), 1e-10);
            // any other point of the dual unit ball pairs to at most the norm
            Matrix z = random_complex(5, 3, rng);
            z /= schatten_norm(z, p.conjugate()).value;
            EXPECT_LE(std::abs((z.adjoint() * x).trace()), norm * (1 + 1e-12));
        }
    }
}

TEST(FactorOracle, Examples) {
    Rng rng(4);
    Matrix x = random_complex(4, 4, rng);
    auto c = schatten_factor_oracle(x, E("2"), E("2"));
    EXPECT_EQ(c.c, E("1"));
    EXPECT_LT(rel(c.product, schatten_norm(x, 1.0)), 1e-10);

    c = schatten_factor_oracle(x, E("inf"), E("2"));
    EXPECT_EQ(c.c, E("2"));
    EXPECT_LT((c.V.adjoint() * c.V - Matrix::Identity(4, 4)).norm(), 1e-12);
    EXPECT_LT(rel(c.product, x.norm()), 1e-10);

    c = schatten_factor_oracle(x, E("6"), E("5/2"));
    EXPECT_EQ(c.c, E("30/17"));
    EXPECT_LT(rel(c.product, schatten_norm(x, 30.0 / 17)), 1e-10);
}

TEST(FactorOracle, CertificatesReproduceInput) {
    Rng rng(5);
    const char* exps[] = {"1", "3/2", "2", "4", "6", "inf"};
    for (int t = 0; t < 30; ++t) {
        Matrix x = random_complex(3 + t % 3, 4, rng);
        for (const char* a : exps)
            for (const char* b : exps) {
                if (E(a).reciprocal() + E(b).reciprocal() > 1) continue;
                auto c = schatten_factor_oracle(x, E(a), E(b));
                EXPECT_LT(c.reconstruction, 1e-12);
                EXPECT_LT(rel(c.product, c.norm.value), 1e-10) << a << " " << b;
                // Hoelder: another factorization cannot do better
                Matrix g = random_complex(c.V.cols(), c.V.cols(), rng);
                Matrix v = c.V * g, w = g.fullPivLu().solve(c.W);
                EXPECT_GE(schatten_norm(v, E(a).to_double()) * schatten_norm(w, E(b).to_double()),
                          c.norm.value * (1 - 1e-9));
            }
    }
    EXPECT_THROW(schatten_factor_oracle(Matrix::Identity(2, 2), E("1"), E("2")), Error);
}

TEST(PairNorm, FactorSpecTranslation) {
    auto s = pair_factor_spec(E("3"), E("5"));
    EXPECT_EQ(s.a, E("6"));
    EXPECT_EQ(s.b, E("5/2"));
    EXPECT_EQ(pair_target_exponent(E("3"), E("5")), E("30/17"));
    EXPECT_EQ(pair_target_exponent(E("2"), E("2")), E("2"));
    EXPECT_EQ(pair_target_exponent(E("1"), E("inf")), E("1"));
    EXPECT_EQ(pair_target_exponent(E("inf"), E("inf")), E("2"));
    EXPECT_EQ(pair_target_exponent(E("inf"), E("1")), E("inf"));
}

TEST(PairNorm, EndpointExamples) {
    Rng rng(6);
    Matrix x = random_complex(4, 4, rng);
    auto r = haagerup_pair_norm(x, E("1"), E("inf"), std::nullopt, quick());
    EXPECT_LT(rel(r.estimate.value, schatten_norm(x, 1.0)), 0.005);
    r = haagerup_pair_norm(x, E("inf"), E("inf"), std::nullopt, quick());
    EXPECT_LT(rel(r.estimate.value, schatten_norm(x, 2.0)), 0.005);
    EXPECT_EQ(r.estimate.kind, EstimateKind::upper);
}

TEST(PairNorm, GenericPairWithinTolerance) {
    Rng rng(7);
    for (int t = 0; t < 2; ++t) {
        Matrix x = random_complex(4, 4, rng);
        DescentOptions o;
        o.seed = 99 + t;
        auto r = haagerup_pair_norm(x, E("3"), E("5"), std::nullopt, o);
        EXPECT_LT(r.gap, 0.005);
        EXPECT_LT(r.estimate.residual, 1e-10);
        EXPECT_LT(rel(r.oracle, schatten_norm(x, 30.0 / 17)), 1e-12);
    }
}

TEST(PairNorm, NeverBelowOracle) {
    Rng rng(8);
    const char* pairs[][2] = {{"2", "2"}, {"4", "4/3"}, {"3/2", "3"}, {"inf", "2"}};
    for (auto& p : pairs) {
        Matrix x = random_complex(3, 3, rng);
        auto r = haagerup_pair_norm(x, E(p[0]), E(p[1]), std::nullopt, quick(4));
        EXPECT_GE(r.estimate.value, r.oracle * (1 - 1e-9));
        EXPECT_LT((r.V * r.W - x).norm() / x.norm(), 1e-10);
    }
}

TEST(PairNorm, RankBudget) {
    Rng rng(9);
    Matrix x = random_complex(4, 2, rng) * random_complex(2, 5, rng);  // rank 2
    auto r = haagerup_pair_norm(x, E("2"), E("2"), 2, quick(4));
    EXPECT_LT(r.gap, 0.005);
    r = haagerup_pair_norm(x, E("2"), E("2"), 6, quick(4));
    EXPECT_EQ(r.V.cols(), 6);
    EXPECT_LT(r.gap, 0.005);
    try {
        haagerup_pair_norm(x, E("2"), E("2"), 1, quick(1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::infeasible_budget);
    }
}

TEST(PairNorm, ScalarsAndZero) {
    Matrix s(1, 1);
    s(0, 0) = Complex(3, -4);
    auto r = haagerup_pair_norm(s, E("3"), E("5"), std::nullopt, quick(2));
    EXPECT_NEAR(r.gap, 0.0, 1e-12);
    EXPECT_NEAR(r.estimate.value, 5.0, 1e-12);
    EXPECT_EQ(haagerup_pair_norm(Matrix::Zero(2, 3), E("2"), E("2")).estimate.value, 0.0);
}

TEST(PairNorm, Homogeneous) {
    Rng rng(10);
    Matrix x = random_complex(3, 3, rng);
    auto a = haagerup_pair_norm(x, E("2"), E("3"), std::nullopt, quick(4));
    auto b = haagerup_pair_norm(Complex(0, -2.5) * x, E("2"), E("3"), std::nullopt, quick(4));
    EXPECT_LT(rel(b.oracle, 2.5 * a.oracle), 1e-12);
    EXPECT_LT(rel(b.estimate.value, 2.5 * a.estimate.value), 1e-6);
}

TEST(PairIdentity, SmallGrid) {
    PairIdentityOptions opt;
    opt.descent = quick(6);
    std::vector<std::pair<Exponent, Exponent>> grid{{E("inf"), E("inf")}, {E("1"), E("inf")}, {E("inf"), E("1")}, {E("2"), E("2")}};
    auto recs = verify_pair_identity(grid, 2, 3, 17, opt);
    ASSERT_EQ(recs.size(), 8u);
    for (const auto& r : recs) {
        EXPECT_TRUE(r.pass) << r.u << "," << r.v << " gap " << r.gap;
        if (r.u == E("2")) EXPECT_EQ(r.target, E("2"));
    }
    for (const auto& r : verify_pair_identity(grid, 3, 1, 5, opt)) EXPECT_NEAR(r.gap, 0.0, 1e-12);
}

TEST(PairIdentity, SizeCap) {
    try {
        verify_pair_identity({{E("2"), E("2")}}, 1, 64, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::budget_exceeded);
    }
}

TEST(Interp, Examples) {
    Rng rng(11);
    Matrix r1 = random_complex(4, 1, rng) * random_complex(1, 4, rng);
    double s1 = schatten_norm(r1, kInf);
    auto b = interp_upper_lower(r1, Rational(1, 3));
    EXPECT_LT(rel(b.upper.value, s1), 1e-12);
    EXPECT_LT(rel(b.lower.value, s1), 1e-12);

    b = interp_upper_lower(Matrix::Identity(4, 4), Rational(1, 2));
    EXPECT_NEAR(b.upper.value, 2.0, 1e-12);
    EXPECT_NEAR(b.lower.value, 2.0, 1e-12);

    Matrix x = random_complex(5, 5, rng);
    b = interp_upper_lower(x, Rational(1, 3));
    double target = schatten_norm(x, 3.0);
    EXPECT_LE(b.width(), 1e-8 * target);
    EXPECT_LE(b.lower.value, target * (1 + 1e-12));
    EXPECT_GE(b.upper.value, target * (1 - 1e-12));

    EXPECT_THROW(interp_upper_lower(x, Rational(1)), Error);
    EXPECT_THROW(interp_upper_lower(x, Rational(0)), Error);
}

TEST(Interp, BracketContainsSchattenNorm) {
    Rng rng(12);
    const Rational thetas[] = {Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(9, 10)};
    for (int t = 0; t < 30; ++t) {
        Matrix x = random_complex(2 + t % 4, 3 + t % 3, rng);
        for (const auto& th : thetas) {
            auto b = interp_upper_lower(x, th);
            double target = schatten_norm(x, 1.0 / to_double(th));
            EXPECT_LE(b.lower.value, target * (1 + 1e-10));
            EXPECT_GE(b.upper.value, target * (1 - 1e-10));
            EXPECT_LE(b.width(), 1e-8 * target);
        }
    }
}

TEST(VectorSchatten, RankOneSupport) {
    Rng rng(13);
    Eigen::VectorXcd c = random_complex(3, 1, rng);
    BlockMatrix x(3, Matrix::Zero(3, 3));
    for (int k = 0; k < 3; ++k) x[k](0, 0) = c[k];
    for (Middle mid : {Middle::column, Middle::row}) {
        auto e = vector_schatten_norm(x, E("3/2"), mid, quick(4));
        EXPECT_LT(rel(e.value, c.norm()), 0.005) << to_string(mid);
    }
}

TEST(VectorSchatten, ScalarMiddleIsSchatten) {
    Rng rng(14);
    for (const char* p : {"1", "2", "3"}) {
        Matrix x = random_complex(3, 3, rng);
        auto e = vector_schatten_norm({x}, E(p), Middle::column, quick(6));
        EXPECT_LT(rel(e.value, schatten_norm(x, E(p)).value), 0.005) << p;
        EXPECT_GE(e.value, schatten_norm(x, E(p)).value * (1 - 1e-9));
    }
}

// At p = inf the space is M_N(E); at p = 1 it is R (x)_h E (x)_h C, whose norm is
// a trace norm of the transposed arrangement.
TEST(VectorSchatten, EndpointArrangements) {
    Rng rng(15);
    BlockMatrix x{random_complex(3, 3, rng), random_complex(3, 3, rng)};
    auto col_inf = vector_schatten_norm(x, E("inf"), Middle::column, quick(6));
    auto row_inf = vector_schatten_norm(x, E("inf"), Middle::row, quick(6));
    auto col_one = vector_schatten_norm(x, E("1"), Middle::column, quick(6));
    auto row_one = vector_schatten_norm(x, E("1"), Middle::row, quick(6));
    EXPECT_LT(rel(col_inf.value, schatten_norm(assemble_middle(x, Middle::column), kInf)), 0.005);
    EXPECT_LT(rel(row_inf.value, schatten_norm(assemble_middle(x, Middle::row), kInf)), 0.005);
    EXPECT_LT(rel(col_one.value, schatten_norm(assemble_middle(x, Middle::row), 1.0)), 0.005);
    EXPECT_LT(rel(row_one.value, schatten_norm(assemble_middle(x, Middle::column), 1.0)), 0.005);
}

TEST(VectorSchatten, CoordinateBounds) {
    Rng rng(16);
    BlockMatrix x{random_complex(2, 2, rng), random_complex(2, 2, rng), random_complex(2, 2, rng)};
    for (Middle mid : {Middle::column, Middle::row}) {
        double v = vector_schatten_norm(x, E("2"), mid, quick(4)).value;
        double sum = 0, mx = 0;
        for (const auto& b : x) {
            double n = schatten_norm(b, 2.0);
            sum += n;
            mx = std::max(mx, n);
        }
        EXPECT_GE(v, mx * (1 - 1e-9));
        EXPECT_LE(v, sum * 1.005);
    }
    EXPECT_THROW(vector_schatten_norm({}, E("2"), Middle::column), Error);
    EXPECT_THROW(vector_schatten_norm({Matrix::Zero(2, 2), Matrix::Zero(3, 2)}, E("2"), Middle::column), Error);
}

TEST(MatrixIo, RoundTrip) {
    Rng rng(17);
    Matrix x = random_complex(2, 3, rng);
    auto j = matrix_to_json(x);
    EXPECT_EQ(j["rows"], 2);
    EXPECT_EQ(j["entries"].size(), 6u);
    EXPECT_EQ(matrix_from_json(nlohmann::json::parse(j.dump())), x);
    auto bad = j;
    bad["cols"] = 4;
    EXPECT_THROW(matrix_from_json(bad), Error);
    EXPECT_THROW(matrix_from_json(nlohmann::json::parse(R"({"rows": 1})")), Error);
    auto real = matrix_from_json(nlohmann::json::parse(R"({"rows": 1, "cols": 2, "entries": [1.5, [0, 2]]})"));
    EXPECT_EQ(real(0, 1), Complex(0, 2));
}

} // namespace
