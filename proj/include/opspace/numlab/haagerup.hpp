#pragma once

#include <optional>

#include "opspace/numlab/descent.hpp"

namespace opspace::numlab {

/// Norms on the two factors of X = V W: ||V||_{S_a} * ||W||_{S_b}, at most `rank` inner dimension.
struct FactorNormSpec {
    Exponent a = Exponent::from_value(2);
    Exponent b = Exponent::from_value(2);
    std::optional<int> rank;  // default min(rows, cols)
};

/// For C_u (x)_h C_v: a row of C_u carries S_{2u}, a column of C_v carries S_{2v/(v-1)}.
inline FactorNormSpec pair_factor_spec(const Exponent& u, const Exponent& v) {
    FactorNormSpec s;
    s.a = Exponent::from_reciprocal(u.reciprocal() / 2);
    s.b = Exponent::from_reciprocal((1 - v.reciprocal()) / 2);
    return s;
}

/// 2 / (1 - 1/v + 1/u)
inline Exponent pair_target_exponent(const Exponent& u, const Exponent& v) {
    auto s = pair_factor_spec(u, v);
    return holder_exponent(s.a, s.b);
}

struct FactorizationResult {
    NormEstimate estimate;  // best ||V||_a ||W||_b found
    Matrix V;
    Matrix W;
    double oracle = 0.0;    // ||X||_{S_c}
    double gap = 0.0;       // (estimate - oracle) / oracle
};

namespace detail {

struct PairRun {
    double best = std::numeric_limits<double>::infinity();
    Matrix V, W;
    long sweeps = 0;
    bool converged = false;
};

/// Descent on log||V||_a + log||W||_b along the orbit V -> V G, W -> G^-1 W.
/// With X = U S Z* and weights w = s^e / sum s^e, the relative gradient is the
/// Hermitian matrix  Zv diag(w_V) Zv* - Uw diag(w_W) Uw*.
inline PairRun descend_pair(Matrix V, Matrix W, double a, double b, const DescentOptions& opt) {
    PairRun run;
    Svd sv = thin_svd(V), sw = thin_svd(W);
    auto record = [&] {
        double f = lp_norm(sv.s, a) * lp_norm(sw.s, b);
        if (f < run.best) {
            run.best = f;
            run.V = V;
            run.W = W;
        }
    };
    record();
    auto stages = smoothing_stages({a, b});
    for (std::size_t st = 0; st < stages.size(); ++st) {
        double ea = stage_exponent(a, stages[st]), eb = stage_exponent(b, stages[st]);
        Stagnation stop(opt.rel_tol, opt.window);
        double eta = 1.0;
        bool stage_done = false;
        for (int sweep = 0; sweep < opt.sweeps && !stage_done; ++sweep, ++run.sweeps) {
            LogNorm lv = log_norm(sv.s, ea), lw = log_norm(sw.s, eb);
            double f = lv.value + lw.value;
            Matrix grad = sv.V * lv.weights.cast<Complex>().asDiagonal() * sv.V.adjoint() -
                          sw.U * lw.weights.cast<Complex>().asDiagonal() * sw.U.adjoint();
            double g2 = grad.squaredNorm();
            if (g2 < 1e-26) {
                stage_done = true;
                break;
            }
            Eigen::SelfAdjointEigenSolver<Matrix> eig(grad);
            bool accepted = false;
            for (; eta > 1e-14; eta *= 0.5) {
                Matrix Vn = V * hermitian_exp(eig, -eta);
                Matrix Wn = hermitian_exp(eig, eta) * W;
                Svd svn = thin_svd(Vn), swn = thin_svd(Wn);
                double fn = log_norm(svn.s, ea).value + log_norm(swn.s, eb).value;
                if (fn <= f - 1e-4 * eta * g2) {
                    V = std::move(Vn);
                    W = std::move(Wn);
                    sv = std::move(svn);
                    sw = std::move(swn);
                    stage_done = stop.push(fn);
                    accepted = true;
                    break;
                }
            }
            if (!accepted) {
                stage_done = true;
                break;
            }
            eta = std::min(eta * 2.0, 64.0);
            // balanced rescaling (V, W) -> (tV, W/t); leaves the product and objective unchanged
            double t = std::sqrt(lp_norm(sw.s, b) / lp_norm(sv.s, a));
            if (std::isfinite(t) && t > 0) {
                V *= t;
                sv.s *= t;
                W /= t;
                sw.s /= t;
            }
            record();
        }
        if (st + 1 == stages.size()) run.converged = stage_done;
    }
    return run;
}

} // namespace detail

/// Upper bound for the factorization norm inf ||V||_a ||W||_b over X = V W by
/// multistart descent, with the Hoelder oracle reported alongside.
inline FactorizationResult factorization_norm(const Matrix& x, const FactorNormSpec& spec, const DescentOptions& opt = {}) {
    require_finite(x, "matrix");
    if (x.size() == 0) throw Error(ErrorCode::invalid_parameter, "empty matrix");
    if (opt.restarts < 1 || opt.sweeps < 1) throw Error(ErrorCode::invalid_parameter, "restarts and sweeps must be positive");
    const Eigen::Index n = x.rows(), m = x.cols(), k = std::min(n, m);
    const Eigen::Index r = spec.rank.value_or(static_cast<int>(k));
    Svd d = thin_svd(x);
    if (r < 1 || r < numerical_rank_cut(d.s, 1e-12 * static_cast<double>(std::max(n, m))))
        throw Error(ErrorCode::infeasible_budget, "rank budget " + std::to_string(r) + " below rank of the input");

    FactorizationResult out;
    out.oracle = schatten_factor_oracle(x, spec.a, spec.b).norm.value;
    out.estimate.kind = EstimateKind::upper;
    out.estimate.seed = opt.seed;
    out.estimate.restarts = opt.restarts;
    if (out.oracle == 0.0) {
        out.V = Matrix::Zero(n, r);
        out.W = Matrix::Zero(r, m);
        return out;
    }

    // balanced split of the SVD padded to the budget; restarts move it by random G
    Matrix V0 = Matrix::Zero(n, r), W0 = Matrix::Zero(r, m);
    // a budget below min(rows, cols) only drops numerically zero singular values
    const Eigen::Index kept = std::min(k, r);
    Eigen::VectorXcd root = d.s.head(kept).cwiseSqrt().cast<Complex>();
    V0.leftCols(kept) = d.U.leftCols(kept) * root.asDiagonal();
    W0.topRows(kept) = root.asDiagonal() * d.V.leftCols(kept).adjoint();

    const double a = spec.a.to_double(), b = spec.b.to_double();
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < opt.restarts; ++i) {
        Rng rng = make_rng(opt.seed, 0x6a11, static_cast<std::uint64_t>(i));
        Matrix G = random_complex(r, r, rng);
        auto lu = G.fullPivLu();
        if (!lu.isInvertible()) continue;
        auto run = detail::descend_pair(V0 * G, lu.solve(W0), a, b, opt);
        out.estimate.iterations += run.sweeps;
        if (run.best < best) {
            best = run.best;
            out.V = run.V;
            out.W = run.W;
            out.estimate.converged = run.converged;
        }
    }
    out.estimate.value = best;
    out.estimate.residual = (out.V * out.W - x).norm() / x.norm();
    out.gap = (best - out.oracle) / out.oracle;
    return out;
}

/// Norm of X in C_u (x)_h C_v at the first matrix level.
inline FactorizationResult haagerup_pair_norm(const Matrix& x, const Exponent& u, const Exponent& v,
                                              std::optional<int> rank = std::nullopt, const DescentOptions& opt = {}) {
    auto spec = pair_factor_spec(u, v);
    spec.rank = rank;
    return factorization_norm(x, spec, opt);
}

} // namespace opspace::numlab
