#pragma once

#include <algorithm>
#include <cmath>

#include "opspace/numlab/matrix.hpp"

namespace opspace::numlab {

struct Svd {
    Matrix U;  // rows x k
    Vector s;  // k, nonincreasing
    Matrix V;  // cols x k, so that X = U diag(s) V*
};

inline Svd thin_svd(const Matrix& x) {
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

inline Vector singular_values(const Matrix& x) {
    if (x.size() == 0) return Vector();
    return Eigen::JacobiSVD<Matrix>(x).singularValues();
}

/// (sum s_k^p)^(1/p), scaled by the largest value so that large p does not overflow.
inline double lp_norm(const Vector& s, double p) {
    if (s.size() == 0) return 0.0;
    double top = s.cwiseAbs().maxCoeff();
    if (top == 0.0 || std::isinf(p)) return top;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) sum += std::pow(std::abs(s[i]) / top, p);
    return top * std::pow(sum, 1.0 / p);
}

inline double schatten_norm(const Matrix& x, double p) {
    if (!(p >= 1.0)) throw Error(ErrorCode::invalid_parameter, "Schatten exponent below 1");
    return lp_norm(singular_values(x), p);
}

inline NormEstimate schatten_norm(const Matrix& x, const Exponent& p) {
    require_finite(x, "matrix");
    return exact_value(schatten_norm(x, p.to_double()));
}

/// Number of singular values above a relative cutoff of the largest.
inline int numerical_rank_cut(const Vector& s, double rel = 1e-14) {
    if (s.size() == 0 || s[0] == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) r += s[i] > rel * s[0];
    return r;
}

/// Y with ||Y||_{p'} = 1 and trace(Y* X) = ||X||_p (Hoelder equality case).
inline Matrix holder_dual(const Matrix& x, const Exponent& p) {
    Svd d = thin_svd(x);
    Matrix y = Matrix::Zero(x.rows(), x.cols());
    double norm = lp_norm(d.s, p.to_double());
    if (norm == 0.0) return y;
    Vector w(d.s.size());
    if (p.is_infinite()) {
        // dual S_1: a unit-trace-norm multiple of the top singular pair
        w.setZero();
        w[0] = 1.0;
    } else if (p.is_one()) {
        for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = d.s[i] > 0 ? 1.0 : 0.0;
    } else {
        double q = p.to_double();
        for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = std::pow(d.s[i] / norm, q - 1.0);
    }
    return d.U * w.cast<Complex>().asDiagonal() * d.V.adjoint();
}

/// Hoelder oracle for ||X||_{S_c} with 1/c = 1/a + 1/b: X = V W with
/// ||V||_a ||W||_b = ||X||_c, built from X = U S Z* as V = U S^{c/a}, W = S^{c/b} Z*.
struct FactorCertificate {
    NormEstimate norm;
    Exponent c = Exponent::one();
    Matrix V;
    Matrix W;
    double product = 0.0;         // ||V||_a * ||W||_b
    double reconstruction = 0.0;  // ||V W - X||_F / ||X||_F
};

inline Exponent holder_exponent(const Exponent& a, const Exponent& b) {
    Rational r = a.reciprocal() + b.reciprocal();
    if (r > 1) throw Error(ErrorCode::invalid_parameter, "1/a + 1/b exceeds 1");
    return Exponent::from_reciprocal(r);
}

inline FactorCertificate schatten_factor_oracle(const Matrix& x, const Exponent& a, const Exponent& b) {
    require_finite(x, "matrix");
    FactorCertificate out;
    out.c = holder_exponent(a, b);
    Svd d = thin_svd(x);
    // split exponents: c/a and c/b, halves when c is infinite
    double ea = 0.5, eb = 0.5;
    if (!out.c.is_infinite()) {
        ea = to_double(a.reciprocal() / out.c.reciprocal());
        eb = to_double(b.reciprocal() / out.c.reciprocal());
    }
    Eigen::VectorXcd left(d.s.size()), right(d.s.size());
    for (Eigen::Index i = 0; i < d.s.size(); ++i) {
        left[i] = ea == 0.0 ? 1.0 : std::pow(d.s[i], ea);
        right[i] = eb == 0.0 ? 1.0 : std::pow(d.s[i], eb);
    }
    out.V = d.U * left.asDiagonal();
    out.W = right.asDiagonal() * d.V.adjoint();
    out.norm = exact_value(lp_norm(d.s, out.c.to_double()));
    out.product = schatten_norm(out.V, a.to_double()) * schatten_norm(out.W, b.to_double());
    double xn = x.norm();
    out.reconstruction = xn == 0.0 ? (out.V * out.W).norm() : (out.V * out.W - x).norm() / xn;
    return out;
}

} // namespace opspace::numlab
