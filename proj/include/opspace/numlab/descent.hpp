#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "opspace/numlab/schatten.hpp"

namespace opspace::numlab {

struct DescentOptions {
    int restarts = 32;
    int sweeps = 500;
    double rel_tol = 1e-9;
    int window = 20;
    std::uint64_t seed = 0x0b5e55edULL;
};

namespace detail {

/// log of an l_e norm of singular values together with the normalized
/// weights s_i^e / sum s^e, which are what the gradient of the log-norm needs.
struct LogNorm {
    double value = -std::numeric_limits<double>::infinity();
    Vector weights;
};

inline LogNorm log_norm(const Vector& s, double e) {
    LogNorm out;
    out.weights = Vector::Zero(s.size());
    if (s.size() == 0) return out;
    double top = s.maxCoeff();
    if (top <= 0.0) return out;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) sum += out.weights[i] = std::pow(s[i] / top, e);
    out.weights /= sum;
    out.value = std::log(top) + std::log(sum) / e;
    return out;
}

/// Exponents used for the smooth surrogate. An infinite exponent is replaced
/// by a sequence of growing finite ones (continuation); the reported
/// objective is always evaluated with the exact norm.
inline std::vector<double> smoothing_stages(const std::vector<double>& exponents) {
    for (double e : exponents)
        if (std::isinf(e)) return {16.0, 64.0, 256.0, 1024.0};
    return {0.0};
}

inline double stage_exponent(double e, double stage) { return std::isinf(e) ? stage : e; }

// exp(t * H) for Hermitian H given its eigendecomposition
inline Matrix hermitian_exp(const Eigen::SelfAdjointEigenSolver<Matrix>& eig, double t) {
    Eigen::VectorXcd d = (t * eig.eigenvalues().array()).exp().cast<Complex>();
    return eig.eigenvectors() * d.asDiagonal() * eig.eigenvectors().adjoint();
}

/// Tracks whether the objective has stopped improving over a trailing window.
class Stagnation {
public:
    Stagnation(double rel_tol, int window, bool maximize = false)
        : tol_(rel_tol), window_(window), sign_(maximize ? -1.0 : 1.0) {}
    // `log_value` is a log-objective, so differences are relative changes
    bool push(double log_value) {
        history_.push_back(log_value);
        if (static_cast<int>(history_.size()) <= window_) return false;
        return sign_ * (history_[history_.size() - 1 - window_] - log_value) < tol_;
    }
    void reset() { history_.clear(); }

private:
    double tol_;
    int window_;
    double sign_;
    std::vector<double> history_;
};

} // namespace detail

} // namespace opspace::numlab
