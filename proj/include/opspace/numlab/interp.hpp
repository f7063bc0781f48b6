#pragma once

#include <algorithm>
#include <cmath>

#include "opspace/numlab/schatten.hpp"

namespace opspace::numlab {

struct InterpBracket {
    NormEstimate upper;
    NormEstimate lower;
    double width() const { return upper.value - lower.value; }
};

/// Bounds on the (S_inf, S_1)_theta norm of X.
///
/// Upper: the analytic family f(z) = U D^{pz} Z* (p = 1/theta) has f(theta) = X,
/// so the three-lines bound gives ||X|| <= A0^{1-theta} A1^theta with
/// A0 = sup_t ||f(it)||_inf and A1 = sup_t ||f(1+it)||_1, both sampled on a grid.
/// Lower: |trace(Y* X)| / ||Y||_{p'} for Y = U D^{p-1} Z*.
inline InterpBracket interp_upper_lower(const Matrix& x, const Rational& theta, int grid = 9) {
    if (theta <= 0 || theta >= 1) throw Error(ErrorCode::invalid_parameter, "theta must lie in (0,1)");
    require_finite(x, "matrix");
    InterpBracket out;
    out.upper.kind = EstimateKind::upper;
    out.lower.kind = EstimateKind::lower;
    Svd d = thin_svd(x);
    const double th = to_double(theta);
    const double p = 1.0 / th;
    const int k = numerical_rank_cut(d.s);
    if (k == 0) return out;

    // singular values scaled by the largest to keep D^p representable
    const double top = d.s[0];
    auto family = [&](Complex z) {
        Eigen::VectorXcd diag = Eigen::VectorXcd::Zero(d.s.size());
        for (int i = 0; i < k; ++i) diag[i] = std::exp(p * z * std::log(d.s[i] / top));
        return Matrix(d.U * diag.asDiagonal() * d.V.adjoint());
    };
    double a0 = 0.0, a1 = 0.0;
    for (int j = 0; j < grid; ++j) {
        double t = -2.0 + 4.0 * j / std::max(grid - 1, 1);
        a0 = std::max(a0, schatten_norm(family(Complex(0.0, t)), std::numeric_limits<double>::infinity()));
        a1 = std::max(a1, schatten_norm(family(Complex(1.0, t)), 1.0));
    }
    out.upper.value = top * std::pow(a0, 1.0 - th) * std::pow(a1, th);
    out.upper.iterations = grid;

    Eigen::VectorXcd dual = Eigen::VectorXcd::Zero(d.s.size());
    for (int i = 0; i < k; ++i) dual[i] = std::pow(d.s[i] / top, p - 1.0);
    Matrix y = d.U * dual.asDiagonal() * d.V.adjoint();
    double yn = schatten_norm(y, p / (p - 1.0));
    out.lower.value = std::abs((y.adjoint() * x).trace()) / yn;
    return out;
}

} // namespace opspace::numlab
