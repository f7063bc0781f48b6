#pragma once

#include <limits>
#include <optional>

#include "opspace/martingale/filtration.hpp"
#include "opspace/martingale/riesz.hpp"
#include "opspace/numlab/descent.hpp"

namespace opspace::martingale {

using numlab::EstimateKind;
using numlab::NormEstimate;

enum class OperatorKind { triangular_upper, triangular_lower, schur, riesz };

inline const char* to_string(OperatorKind k) {
    switch (k) {
    case OperatorKind::triangular_upper: return "triangular-upper";
    case OperatorKind::triangular_lower: return "triangular-lower";
    case OperatorKind::schur: return "schur";
    case OperatorKind::riesz: return "riesz";
    }
    return "?";
}

inline OperatorKind parse_operator(std::string_view s) {
    if (s == "triangular-upper" || s == "triangular") return OperatorKind::triangular_upper;
    if (s == "triangular-lower") return OperatorKind::triangular_lower;
    if (s == "schur") return OperatorKind::schur;
    if (s == "riesz") return OperatorKind::riesz;
    throw Error(ErrorCode::invalid_parameter, "unknown operator '" + std::string(s) + "'");
}

struct OperatorSpec {
    OperatorKind kind = OperatorKind::triangular_upper;
    std::optional<SignPattern> signs;  // schur only
    int degree = 4;                    // riesz: frequency window [-degree, degree]
};

struct AscentOptions {
    int restarts = 32;
    int iterations = 500;
    double rel_tol = 1e-12;
    int window = 10;
    std::uint64_t seed = 0x0a5cULL;
    int max_size = 64;
};

struct OperatorEstimate {
    NormEstimate estimate;         // lower bound on ||Op : S_p^N -> S_p^N||
    Matrix witness;                // matrix operators: unit vector achieving the ratio
    TrigPolynomial witness_poly;   // riesz
};

namespace detail {

inline Matrix apply(const OperatorSpec& op, const Matrix& x) {
    switch (op.kind) {
    case OperatorKind::triangular_upper: return triangular_proj(x, Triangle::upper);
    case OperatorKind::triangular_lower: return triangular_proj(x, Triangle::lower);
    case OperatorKind::schur:
        if (!op.signs) throw Error(ErrorCode::invalid_parameter, "schur operator needs a sign pattern");
        return schur_sign_transform(x, *op.signs);
    case OperatorKind::riesz: break;
    }
    throw Error(ErrorCode::invalid_parameter, "not a matrix operator");
}

/// Ratio ||Op x||_p / ||x||_p.
inline double ratio(const OperatorSpec& op, const Matrix& x, double p) {
    return numlab::schatten_norm(apply(op, x), p) / numlab::schatten_norm(x, p);
}

// Matrix-valued samples of a coefficient window [-d, d] on the nodes, and the adjoint map.
struct Sampler {
    int d;
    std::vector<Complex> nodes;

    std::vector<Matrix> samples(const std::vector<Matrix>& c) const {
        std::vector<Matrix> s;
        for (Complex z : nodes) {
            Matrix v = Matrix::Zero(c[0].rows(), c[0].cols());
            for (int n = -d; n <= d; ++n) v += std::pow(z, n) * c[static_cast<std::size_t>(n + d)];
            s.push_back(std::move(v));
        }
        return s;
    }
    std::vector<Matrix> coefficients(const std::vector<Matrix>& s) const {
        std::vector<Matrix> c;
        const double k = static_cast<double>(nodes.size());
        for (int n = -d; n <= d; ++n) {
            Matrix v = Matrix::Zero(s[0].rows(), s[0].cols());
            for (std::size_t j = 0; j < nodes.size(); ++j) v += std::conj(std::pow(nodes[j], n)) * s[j];
            c.push_back(v / k);
        }
        return c;
    }
};

inline double sampled_norm(const std::vector<Matrix>& s, double p) {
    double top = 0.0;
    std::vector<double> v;
    for (const auto& m : s) v.push_back(numlab::schatten_norm(m, p)), top = std::max(top, v.back());
    if (top == 0.0) return 0.0;
    double sum = 0.0;
    for (double x : v) sum += std::pow(x / top, p);
    return top * std::pow(sum / static_cast<double>(s.size()), 1.0 / p);
}

// pointwise U S^{r} V*, the gradient direction of the sampled L_p(S_p) norm when r = p - 1
inline std::vector<Matrix> pointwise_power(const std::vector<Matrix>& s, double r) {
    std::vector<Matrix> out;
    for (const auto& m : s) {
        auto d = numlab::thin_svd(m);
        Eigen::VectorXcd w(d.s.size());
        for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = d.s[i] > 0 ? std::pow(d.s[i], r) : 0.0;
        out.push_back(d.U * w.asDiagonal() * d.V.adjoint());
    }
    return out;
}

inline void keep_nonnegative(std::vector<Matrix>& c, int d) {
    for (int n = -d; n < 0; ++n) c[static_cast<std::size_t>(n + d)].setZero();
}

inline OperatorEstimate estimate_riesz(int degree, const Exponent& pe, int size, const AscentOptions& opt) {
    const double p = pe.to_double(), q = pe.conjugate().to_double();
    Sampler sm{degree, unit_roots(quadrature_nodes(degree))};
    OperatorEstimate out;
    out.estimate.kind = EstimateKind::lower;
    out.estimate.seed = opt.seed;
    out.estimate.restarts = opt.restarts;
    out.estimate.converged = false;
    std::vector<Matrix> best;
    for (int r = 0; r < opt.restarts; ++r) {
        Rng rng = make_rng(opt.seed, 0x12e5, static_cast<std::uint64_t>(r));
        std::vector<Matrix> c;
        for (int n = -degree; n <= degree; ++n) c.push_back(numlab::random_complex(size, size, rng));
        numlab::detail::Stagnation stop(opt.rel_tol, opt.window, true);
        for (int it = 0; it < opt.iterations; ++it, ++out.estimate.iterations) {
            auto sx = sm.samples(c);
            double nx = sampled_norm(sx, p);
            auto rc = c;
            keep_nonnegative(rc, degree);
            auto sy = sm.samples(rc);
            double ratio = sampled_norm(sy, p) / nx;
            if (ratio > out.estimate.value) {
                out.estimate.value = ratio;
                best = c;
            }
            if (stop.push(std::log(ratio))) {
                out.estimate.converged = true;
                break;
            }
            // dual step R* J_p(R x), then back through the pointwise p'-map and the window
            auto z = sm.coefficients(pointwise_power(sy, p - 1.0));
            keep_nonnegative(z, degree);
            c = sm.coefficients(pointwise_power(sm.samples(z), q - 1.0));
            double nc = sampled_norm(sm.samples(c), p);
            if (!(nc > 0.0)) break;
            for (auto& m : c) m /= nc;
        }
    }
    out.witness_poly = TrigPolynomial(size, size);
    for (int n = -degree; n <= degree; ++n) out.witness_poly.set(n, best[static_cast<std::size_t>(n + degree)]);
    return out;
}

} // namespace detail

/// Ratio of the sampled L_p(S_p) norms of R f and f, as used by the Riesz estimate.
inline double riesz_ratio(const TrigPolynomial& f, const Exponent& p, int degree) {
    int k = quadrature_nodes(degree);
    return lp_norm(riesz_projection(f), p.to_double(), k) / lp_norm(f, p.to_double(), k);
}

/// Lower bound on the S_p^N -> S_p^N norm of `op` by nonlinear power iteration
/// x <- J_{p'}(Op* J_p(Op x)) from random complex starts; the masks are self-adjoint.
inline OperatorEstimate estimate_operator_norm(const OperatorSpec& op, const Exponent& p, int size,
                                               const AscentOptions& opt = {}) {
    if (!p.is_strict()) throw Error(ErrorCode::out_of_range, "exponent must lie strictly between 1 and inf");
    if (size < 1) throw Error(ErrorCode::invalid_parameter, "size must be positive");
    if (size > opt.max_size)
        throw Error(ErrorCode::budget_exceeded, "size " + std::to_string(size) + " exceeds cap " + std::to_string(opt.max_size));
    if (opt.restarts < 1) throw Error(ErrorCode::invalid_parameter, "restarts must be positive");
    if (op.kind == OperatorKind::riesz) {
        if (op.degree < 0) throw Error(ErrorCode::invalid_parameter, "negative degree");
        return detail::estimate_riesz(op.degree, p, size, opt);
    }
    if (op.kind == OperatorKind::schur && (!op.signs || op.signs->size() < size))
        throw Error(ErrorCode::invalid_parameter, "schur operator needs a sign pattern of length >= size");

    const double pd = p.to_double();
    const Exponent q = p.conjugate();
    OperatorEstimate out;
    out.estimate.kind = EstimateKind::lower;
    out.estimate.seed = opt.seed;
    out.estimate.restarts = opt.restarts;
    out.estimate.converged = false;
    for (int r = 0; r < opt.restarts; ++r) {
        Rng rng = make_rng(opt.seed, 0x0e57, static_cast<std::uint64_t>(r));
        Matrix x = numlab::random_complex(size, size, rng);
        x /= numlab::schatten_norm(x, pd);
        numlab::detail::Stagnation stop(opt.rel_tol, opt.window, true);
        for (int it = 0; it < opt.iterations; ++it, ++out.estimate.iterations) {
            Matrix y = detail::apply(op, x);
            double ratio = numlab::schatten_norm(y, pd) / numlab::schatten_norm(x, pd);
            if (ratio > out.estimate.value) {
                out.estimate.value = ratio;
                out.witness = x;
            }
            if (ratio == 0.0) break;
            if (stop.push(std::log(ratio))) {
                out.estimate.converged = true;
                break;
            }
            Matrix z = detail::apply(op, numlab::holder_dual(y, p));
            if (z.norm() == 0.0) break;
            x = numlab::holder_dual(z, q);
        }
    }
    return out;
}

struct KpEstimate {
    NormEstimate estimate;
    SignPattern pattern;   // best pattern found
    long patterns = 0;     // patterns examined
    bool sampled = false;
    OperatorEstimate best;
};

/// max over sign patterns of the estimated norm of T_eps on S_p^N. Enumeration fixes
/// eps_1 = +1 since eps and -eps give the same norm. Beyond 2^enumerate_cap patterns
/// the patterns are sampled uniformly (256 when `samples` is 0) and `sampled` is set.
inline KpEstimate estimate_Kp(const Exponent& p, int size, bool enumerate = true, long samples = 256,
                              const AscentOptions& opt = {}, int enumerate_cap = 12) {
    if (size < 1) throw Error(ErrorCode::invalid_parameter, "size must be positive");
    if (size > opt.max_size)
        throw Error(ErrorCode::budget_exceeded, "matrix size " + std::to_string(size) + " exceeds cap " +
                                                    std::to_string(opt.max_size));
    if (enumerate && size - 1 > enumerate_cap) {
        enumerate = false;
        if (samples <= 0) samples = 256;
    }
    KpEstimate out;
    out.sampled = !enumerate;
    out.estimate.kind = EstimateKind::lower;
    out.estimate.seed = opt.seed;
    out.estimate.restarts = opt.restarts;
    auto consider = [&](const SignPattern& eps) {
        OperatorSpec op{OperatorKind::schur, eps, 0};
        AscentOptions o = opt;
        o.seed = derive_seed(opt.seed, 0x4b9, static_cast<std::uint64_t>(out.patterns));
        auto e = estimate_operator_norm(op, p, size, o);
        out.estimate.iterations += e.estimate.iterations;
        ++out.patterns;
        if (out.patterns == 1 || e.estimate.value > out.estimate.value) {
            out.estimate.value = e.estimate.value;
            out.estimate.converged = e.estimate.converged;
            out.pattern = eps;
            out.best = std::move(e);
        }
    };
    if (enumerate) {
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << (size - 1)); ++m)
            consider(SignPattern::from_mask(m << 1, size));
    } else {
        Rng rng = make_rng(opt.seed, 0x5a3);
        std::uniform_int_distribution<std::uint64_t> bits(0, (std::uint64_t{1} << std::min(size - 1, 62)) - 1);
        for (long s = 0; s < samples; ++s) consider(SignPattern::from_mask(bits(rng) << 1, size));
    }
    return out;
}

struct BoundCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

struct ConstantBoundsReport {
    Exponent p;
    int size = 0;
    double delta = 0.0;
    NormEstimate triangular;  // max of the upper and lower variants
    KpEstimate kp;
    std::vector<BoundCheck> checks;
    std::string caveat;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// Checks T <= K + delta, K <= 2T + 1 + delta and T <= (K + 1)/2 + delta on the estimates.
inline ConstantBoundsReport verify_constant_bounds(const Exponent& p, int size, double delta, const AscentOptions& opt = {}) {
    ConstantBoundsReport rep;
    rep.p = p;
    rep.size = size;
    rep.delta = delta;
    AscentOptions o = opt;
    o.seed = derive_seed(opt.seed, 0x7a1);
    auto up = estimate_operator_norm({OperatorKind::triangular_upper, std::nullopt, 0}, p, size, o);
    o.seed = derive_seed(opt.seed, 0x7a2);
    auto lo = estimate_operator_norm({OperatorKind::triangular_lower, std::nullopt, 0}, p, size, o);
    rep.triangular = up.estimate.value >= lo.estimate.value ? up.estimate : lo.estimate;
    rep.triangular.iterations = up.estimate.iterations + lo.estimate.iterations;
    o.seed = derive_seed(opt.seed, 0x7a3);
    rep.kp = estimate_Kp(p, size, true, 0, o);
    const double t = rep.triangular.value, k = rep.kp.estimate.value;
    rep.checks = {
        {"T <= K", t, k + delta, t <= k + delta},
        {"K <= 2T + 1", k, 2 * t + 1 + delta, k <= 2 * t + 1 + delta},
        {"T <= (K + 1)/2", t, (k + 1) / 2 + delta, t <= (k + 1) / 2 + delta},
    };
    rep.caveat = "both T and K are lower-bound estimates; a pass is consistent with the inequalities but does not prove them";
    return rep;
}

} // namespace opspace::martingale
