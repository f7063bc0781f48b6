#pragma once

#include <vector>

#include "opspace/numlab/descent.hpp"

namespace opspace::numlab {

/// Middle factor of C_p (x)_h E (x)_h R_p for E = C^m with its column or row structure.
enum class Middle { column, row };

inline const char* to_string(Middle m) { return m == Middle::column ? "column" : "row"; }

/// Matrix of E-valued entries, E = C^m: block k holds the k-th coordinate of every entry.
using BlockMatrix = std::vector<Matrix>;

/// Concrete matrix carrying the M_{N,M}(E) norm as its operator norm:
/// block-columns stacked vertically for a column middle, side by side for a row middle.
inline Matrix assemble_middle(const BlockMatrix& y, Middle mid) {
    const auto m = static_cast<Eigen::Index>(y.size());
    const Eigen::Index r = y[0].rows(), c = y[0].cols();
    Matrix s = mid == Middle::column ? Matrix(m * r, c) : Matrix(r, m * c);
    for (Eigen::Index k = 0; k < m; ++k) {
        if (mid == Middle::column) s.middleRows(k * r, r) = y[k];
        else s.middleCols(k * c, c) = y[k];
    }
    return s;
}

namespace detail {

inline void check_blocks(const BlockMatrix& x) {
    if (x.empty()) throw Error(ErrorCode::invalid_parameter, "no blocks");
    for (const auto& b : x) {
        require_finite(b, "block");
        if (b.rows() != x[0].rows() || b.cols() != x[0].cols() || b.size() == 0)
            throw Error(ErrorCode::invalid_parameter, "blocks must be nonempty and of equal shape");
    }
}

struct ThreeFactor {
    Matrix G, H;  // x_k = G y_k H
    BlockMatrix y;
    Svd sg, sh, ss;
};

inline bool solve_middle(const BlockMatrix& x, ThreeFactor& t, Middle mid) {
    auto lg = t.G.fullPivLu();
    auto lh = t.H.adjoint().fullPivLu();
    if (!lg.isInvertible() || !lh.isInvertible()) return false;
    t.y.resize(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) t.y[k] = lh.solve(lg.solve(x[k]).adjoint()).adjoint();
    t.sg = thin_svd(t.G);
    t.sh = thin_svd(t.H);
    t.ss = thin_svd(assemble_middle(t.y, mid));
    return true;
}

} // namespace detail

/// Upper bound for ||x||_{S_p[E]} = inf ||A||_{2p} ||y||_{M(E)} ||B||_{2p} over x = A y B,
/// by multistart descent over invertible A and B (y then determined).
inline NormEstimate vector_schatten_norm(const BlockMatrix& x, const Exponent& p, Middle mid, const DescentOptions& opt = {}) {
    detail::check_blocks(x);
    if (opt.restarts < 1 || opt.sweeps < 1) throw Error(ErrorCode::invalid_parameter, "restarts and sweeps must be positive");
    const Eigen::Index n = x[0].rows(), mcols = x[0].cols();
    const auto m = static_cast<Eigen::Index>(x.size());
    const double outer = Exponent::from_reciprocal(p.reciprocal() / 2).to_double();
    const double inf = std::numeric_limits<double>::infinity();

    NormEstimate out;
    out.kind = EstimateKind::upper;
    out.seed = opt.seed;
    out.restarts = opt.restarts;
    out.value = inf;
    if (assemble_middle(x, mid).norm() == 0.0) {
        out.value = 0.0;
        return out;
    }

    auto stages = detail::smoothing_stages({inf});
    for (int i = 0; i < opt.restarts; ++i) {
        Rng rng = make_rng(opt.seed, 0x5c47, static_cast<std::uint64_t>(i));
        detail::ThreeFactor cur;
        cur.G = random_complex(n, n, rng);
        cur.H = random_complex(mcols, mcols, rng);
        if (!detail::solve_middle(x, cur, mid)) continue;
        double best = inf;
        auto record = [&] {
            double f = lp_norm(cur.sg.s, outer) * cur.ss.s[0] * lp_norm(cur.sh.s, outer);
            best = std::min(best, f);
        };
        record();
        bool converged = false;
        for (double stage : stages) {
            double eo = detail::stage_exponent(outer, stage);
            auto objective = [&](const detail::ThreeFactor& t, detail::LogNorm* lg, detail::LogNorm* lh, detail::LogNorm* ls) {
                auto a = detail::log_norm(t.sg.s, eo), b = detail::log_norm(t.sh.s, eo), c = detail::log_norm(t.ss.s, stage);
                double v = a.value + b.value + c.value;
                if (lg) *lg = std::move(a), *lh = std::move(b), *ls = std::move(c);
                return v;
            };
            detail::Stagnation stop(opt.rel_tol, opt.window);
            double eta = 1.0;
            bool done = false;
            for (int sweep = 0; sweep < opt.sweeps && !done; ++sweep, ++out.iterations) {
                detail::LogNorm lg, lh, ls;
                double f = objective(cur, &lg, &lh, &ls);
                // d log||S|| = Re tr(K dS) with K = Zs diag(w/s) Us*; split K into the blocks matching y_k
                Vector ws = ls.weights;
                for (Eigen::Index j = 0; j < ws.size(); ++j) ws[j] = cur.ss.s[j] > 0 ? ws[j] / cur.ss.s[j] : 0.0;
                Matrix K = cur.ss.V * ws.cast<Complex>().asDiagonal() * cur.ss.U.adjoint();
                Matrix mg = cur.sg.V * lg.weights.cast<Complex>().asDiagonal() * cur.sg.V.adjoint();
                Matrix mh = cur.sh.U * lh.weights.cast<Complex>().asDiagonal() * cur.sh.U.adjoint();
                for (Eigen::Index k = 0; k < m; ++k) {
                    Matrix Kk = mid == Middle::column ? Matrix(K.middleCols(k * n, n)) : Matrix(K.middleRows(k * mcols, mcols));
                    mg -= cur.y[k] * Kk;
                    mh -= Kk * cur.y[k];
                }
                Matrix dg = mg.adjoint(), dh = mh.adjoint();
                double g2 = dg.squaredNorm() + dh.squaredNorm();
                if (g2 < 1e-26) {
                    done = true;
                    break;
                }
                bool accepted = false;
                for (; eta > 1e-14; eta *= 0.5) {
                    detail::ThreeFactor trial;
                    trial.G = cur.G * (Matrix::Identity(n, n) - eta * dg);
                    trial.H = (Matrix::Identity(mcols, mcols) - eta * dh) * cur.H;
                    if (!detail::solve_middle(x, trial, mid)) continue;
                    double fn = objective(trial, nullptr, nullptr, nullptr);
                    if (fn <= f - 1e-4 * eta * g2) {
                        cur = std::move(trial);
                        done = stop.push(fn);
                        accepted = true;
                        break;
                    }
                }
                if (!accepted) {
                    done = true;
                    break;
                }
                eta = std::min(eta * 2.0, 16.0);
                // keep the outer factors at unit norm; the middle absorbs the scale
                double tg = lp_norm(cur.sg.s, outer), th = lp_norm(cur.sh.s, outer);
                cur.G /= tg;
                cur.H /= th;
                detail::solve_middle(x, cur, mid);
                record();
            }
            converged = done;
        }
        if (best < out.value) {
            out.value = best;
            out.converged = converged;
        }
    }
    return out;
}

} // namespace opspace::numlab
