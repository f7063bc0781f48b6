#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "opspace/martingale/filtration.hpp"
#include "opspace/numlab/descent.hpp"

namespace opspace::martingale {

/// E_0 = C, E_{k+1} = l_p^w(l_q^w(E_k)); an element of E_n is a flat vector of
/// length w^(2n), outer index slowest.
struct MixedNormSpace {
    Exponent p = Exponent::from_value(2);
    Exponent q = Exponent::from_value(2);
    int width = 2;
    int depth = 0;

    Eigen::Index dimension() const {
        Eigen::Index d = 1;
        for (int k = 0; k < depth; ++k) d *= static_cast<Eigen::Index>(width) * width;
        return d;
    }

    void validate() const {
        if (!p.is_strict() || !q.is_strict()) throw Error(ErrorCode::invalid_parameter, "exponents must lie in (1, inf)");
        if (width < 1 || depth < 0) throw Error(ErrorCode::invalid_parameter, "width must be positive and depth nonnegative");
    }

    MixedNormSpace nested(int n) const { return {p, q, width, n}; }
};

namespace detail {

inline double lnorm(const std::vector<double>& a, double p) {
    double top = 0.0;
    for (double x : a) top = std::max(top, x);
    if (top == 0.0) return 0.0;
    double s = 0.0;
    for (double x : a) s += std::pow(x / top, p);
    return top * std::pow(s, 1.0 / p);
}

// Norm of v[0 .. dim) at nesting `level`; writes the gradient into `grad` when given.
inline double mixed_norm_grad(const double* v, int level, int width, double p, double q, double* grad) {
    if (level == 0) {
        if (grad) *grad = v[0] > 0 ? 1.0 : v[0] < 0 ? -1.0 : 0.0;
        return std::abs(v[0]);
    }
    Eigen::Index inner = 1;
    for (int k = 1; k < level; ++k) inner *= static_cast<Eigen::Index>(width) * width;
    std::vector<double> b(static_cast<std::size_t>(width) * width), a(static_cast<std::size_t>(width));
    for (int i = 0; i < width; ++i) {
        for (int j = 0; j < width; ++j) {
            auto k = static_cast<std::size_t>(i * width + j);
            b[k] = mixed_norm_grad(v + static_cast<Eigen::Index>(k) * inner, level - 1, width, p, q,
                                   grad ? grad + static_cast<Eigen::Index>(k) * inner : nullptr);
        }
        a[static_cast<std::size_t>(i)] = lnorm({b.begin() + i * width, b.begin() + (i + 1) * width}, q);
    }
    double n = lnorm(a, p);
    if (grad) {
        for (int i = 0; i < width; ++i)
            for (int j = 0; j < width; ++j) {
                auto k = static_cast<std::size_t>(i * width + j);
                double ai = a[static_cast<std::size_t>(i)];
                double s = (n > 0 && ai > 0 && b[k] > 0) ? std::pow(ai / n, p - 1) * std::pow(b[k] / ai, q - 1) : 0.0;
                for (Eigen::Index t = 0; t < inner; ++t) grad[static_cast<Eigen::Index>(k) * inner + t] *= s;
            }
    }
    return n;
}

} // namespace detail

inline double mixed_norm(const Eigen::VectorXd& v, const MixedNormSpace& space) {
    space.validate();
    if (v.size() != space.dimension())
        throw Error(ErrorCode::invalid_parameter, "array of length " + std::to_string(v.size()) + " does not match dimension " +
                                                      std::to_string(space.dimension()));
    return detail::mixed_norm_grad(v.data(), space.depth, space.width, space.p.to_double(), space.q.to_double(), nullptr);
}

struct UMDConstantEstimate {
    double value = 1.0;      // lower bound on beta_2
    int nesting = 0;         // n in E_n
    int martingale_depth = 0;
    SignPattern signs;       // best transform found
    Eigen::MatrixXd witness; // 2^d x dim(E_n): values of f on {-1,1}^d (row = sign mask)
    numlab::NormEstimate meta;
};

struct UmdOptions {
    int restarts = 8;
    int rounds = 40;          // sign re-selection rounds per restart
    int steps = 25;           // ascent steps per round
    double rel_tol = 1e-10;
    std::uint64_t seed = 0x0bd0ULL;
    long max_entries = 1L << 20;
};

namespace detail {

// In-place unnormalized Walsh-Hadamard transform along the rows index.
inline void walsh(Eigen::MatrixXd& f) {
    const Eigen::Index n = f.rows();
    for (Eigen::Index h = 1; h < n; h <<= 1)
        for (Eigen::Index i = 0; i < n; i += h << 1)
            for (Eigen::Index j = i; j < i + h; ++j) {
                Eigen::RowVectorXd a = f.row(j), b = f.row(j + h);
                f.row(j) = a + b;
                f.row(j + h) = a - b;
            }
}

class PaleyWalsh {
public:
    PaleyWalsh(int d, MixedNormSpace space) : d_(d), space_(std::move(space)) {}

    // sum_k eps_k dx_k: the Walsh coefficient of a set A is multiplied by eps_{max A}
    Eigen::MatrixXd transform(const Eigen::MatrixXd& f, const SignPattern& eps) const {
        Eigen::MatrixXd c = f;
        walsh(c);
        c.row(0).setZero();
        for (Eigen::Index a = 1; a < c.rows(); ++a) {
            int top = 0;
            while ((a >> (top + 1)) != 0) ++top;
            if (eps(top + 1) < 0) c.row(a) *= -1.0;
        }
        walsh(c);
        return c / static_cast<double>(c.rows());
    }

    // log of the L_2(E) norm and, if asked, its gradient
    double log_l2(const Eigen::MatrixXd& f, Eigen::MatrixXd* grad) const {
        const double p = space_.p.to_double(), q = space_.q.to_double();
        Eigen::VectorXd row(f.cols()), g(f.cols());
        Eigen::VectorXd norms(f.rows());
        if (grad) grad->resize(f.rows(), f.cols());
        for (Eigen::Index i = 0; i < f.rows(); ++i) {
            row = f.row(i).transpose();
            norms[i] = mixed_norm_grad(row.data(), space_.depth, space_.width, p, q, grad ? g.data() : nullptr);
            if (grad) grad->row(i) = norms[i] * g.transpose();
        }
        double l2sq = norms.squaredNorm() / static_cast<double>(f.rows());
        if (grad) *grad /= l2sq * static_cast<double>(f.rows());
        return 0.5 * std::log(l2sq);
    }

    double ratio_log(const Eigen::MatrixXd& f, const SignPattern& eps) const {
        return log_l2(transform(f, eps), nullptr) - log_l2(f, nullptr);
    }

    SignPattern best_signs(const Eigen::MatrixXd& f, double* value) const {
        SignPattern best = SignPattern::all_plus(d_);
        *value = -std::numeric_limits<double>::infinity();
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << (d_ - 1)); ++m) {
            auto eps = SignPattern::from_mask(m << 1, d_);
            double v = ratio_log(f, eps);
            if (v > *value) *value = v, best = eps;
        }
        return best;
    }

    // gradient of log||T f|| - log||f|| in f, restricted to mean-zero f
    Eigen::MatrixXd gradient(const Eigen::MatrixXd& f, const SignPattern& eps, double* value) const {
        Eigen::MatrixXd gt, gf;
        Eigen::MatrixXd tf = transform(f, eps);
        *value = log_l2(tf, &gt) - log_l2(f, &gf);
        Eigen::MatrixXd g = transform(gt, eps) - gf;
        g.rowwise() -= g.colwise().mean();
        return g;
    }

    int depth() const { return d_; }

private:
    int d_;
    MixedNormSpace space_;
};

} // namespace detail

/// Embeds a witness for (nesting n, depth d) into (nesting n', depth d') with n' >= n,
/// d' >= d: E_n sits isometrically in E_{n'} as the first coordinate block, and f
/// ignores the extra signs. The ratio is unchanged.
inline Eigen::MatrixXd lift_witness(const Eigen::MatrixXd& f, Eigen::Index rows, Eigen::Index dim) {
    if (rows < f.rows() || dim < f.cols() || rows % f.rows() != 0)
        throw Error(ErrorCode::invalid_parameter, "witness can only be lifted to larger spaces");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, dim);
    for (Eigen::Index i = 0; i < rows; ++i) out.row(i).head(f.cols()) = f.row(i % f.rows());
    return out;
}

/// Lower bound on beta_2(E_n) over Paley-Walsh martingales with d steps: maximizes
/// ||sum eps_k dx_k||_{L_2(E)} / ||sum dx_k||_{L_2(E)} by alternating sign enumeration
/// and gradient ascent. `warm` (if any) is lifted and used as the first start.
inline UMDConstantEstimate umd_lower_estimate(const MixedNormSpace& space, int d, const UmdOptions& opt = {},
                                              const Eigen::MatrixXd* warm = nullptr) {
    space.validate();
    if (d < 1 || d > 20) throw Error(ErrorCode::invalid_parameter, "martingale depth must lie in 1..20");
    const Eigen::Index rows = Eigen::Index{1} << d, dim = space.dimension();
    if (static_cast<double>(rows) * static_cast<double>(dim) > static_cast<double>(opt.max_entries))
        throw Error(ErrorCode::budget_exceeded, "2^" + std::to_string(d) + " x " + std::to_string(dim) + " = " +
                                                    std::to_string(rows * dim) + " values exceed the budget of " +
                                                    std::to_string(opt.max_entries));
    detail::PaleyWalsh pw(d, space);
    UMDConstantEstimate out;
    out.nesting = space.depth;
    out.martingale_depth = d;
    out.signs = SignPattern::all_plus(d);
    out.meta.kind = numlab::EstimateKind::lower;
    out.meta.seed = opt.seed;
    out.meta.restarts = opt.restarts;
    double best_log = 0.0;
    out.witness = Eigen::MatrixXd::Zero(rows, dim);

    auto run = [&](Eigen::MatrixXd f) {
        f.rowwise() -= f.colwise().mean();
        if (f.norm() == 0.0) return;
        f /= f.norm();
        numlab::detail::Stagnation stop(opt.rel_tol, 3, true);
        for (int round = 0; round < opt.rounds; ++round) {
            double value;
            SignPattern eps = pw.best_signs(f, &value);
            if (value > best_log) best_log = value, out.witness = f, out.signs = eps;
            double eta = 1.0;
            for (int s = 0; s < opt.steps; ++s, ++out.meta.iterations) {
                Eigen::MatrixXd g = pw.gradient(f, eps, &value);
                double g2 = g.squaredNorm();
                if (g2 < 1e-30) break;
                bool ok = false;
                for (; eta > 1e-12; eta *= 0.5) {
                    Eigen::MatrixXd fn = f + eta * g;
                    double vn = pw.ratio_log(fn, eps);
                    if (vn >= value + 1e-4 * eta * g2) {
                        f = fn / fn.norm();
                        value = vn;
                        ok = true;
                        break;
                    }
                }
                if (value > best_log) best_log = value, out.witness = f, out.signs = eps;
                if (!ok) break;
                eta = std::min(eta * 2.0, 1e3);
            }
            if (stop.push(best_log)) break;
        }
    };

    if (warm && warm->size() > 0) run(lift_witness(*warm, rows, dim));
    for (int r = 0; r < opt.restarts; ++r) {
        Rng rng = make_rng(opt.seed, 0x0d0 + static_cast<std::uint64_t>(space.depth), static_cast<std::uint64_t>(r));
        std::normal_distribution<double> g;
        Eigen::MatrixXd f(rows, dim);
        for (Eigen::Index j = 0; j < dim; ++j)
            for (Eigen::Index i = 0; i < rows; ++i) f(i, j) = g(rng);
        run(std::move(f));
    }
    out.value = std::exp(best_log);
    out.meta.value = out.value;
    return out;
}

/// Lower bounds for E_0, ..., E_n with each level started from the previous optimum.
inline std::vector<UMDConstantEstimate> umd_growth(const MixedNormSpace& space, int max_nesting, int d,
                                                   const UmdOptions& opt = {}) {
    std::vector<UMDConstantEstimate> out;
    for (int n = 0; n <= max_nesting; ++n) {
        const Eigen::MatrixXd* warm = out.empty() ? nullptr : &out.back().witness;
        out.push_back(umd_lower_estimate(space.nested(n), d, opt, warm));
    }
    return out;
}

} // namespace opspace::martingale
