#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "opspace/numlab/matrix.hpp"

namespace opspace::martingale {

using numlab::Complex;
using numlab::Matrix;

/// Signs eps_1, ..., eps_n, each +1 or -1; text form is a string over {+,-}.
class SignPattern {
public:
    SignPattern() = default;
    explicit SignPattern(std::vector<int> signs) : signs_(std::move(signs)) {
        if (signs_.empty()) throw Error(ErrorCode::invalid_parameter, "empty sign pattern");
        for (int s : signs_)
            if (s != 1 && s != -1) throw Error(ErrorCode::invalid_parameter, "signs must be +1 or -1");
    }

    static SignPattern parse(std::string_view text) {
        std::vector<int> s;
        for (char c : text) {
            if (c == '+') s.push_back(1);
            else if (c == '-') s.push_back(-1);
            else throw Error(ErrorCode::invalid_parameter, "sign pattern may contain only '+' and '-'");
        }
        return SignPattern(std::move(s));
    }

    /// Bit k of `mask` set means eps_{k+1} = -1.
    static SignPattern from_mask(std::uint64_t mask, int n) {
        std::vector<int> s(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) s[static_cast<std::size_t>(k)] = (mask >> k) & 1 ? -1 : 1;
        return SignPattern(std::move(s));
    }

    static SignPattern all_plus(int n) { return SignPattern(std::vector<int>(static_cast<std::size_t>(n), 1)); }

    int size() const { return static_cast<int>(signs_.size()); }
    // 1-based, matching eps_n
    int operator()(int n) const { return signs_.at(static_cast<std::size_t>(n - 1)); }
    const std::vector<int>& signs() const { return signs_; }

    std::string str() const {
        std::string out;
        for (int s : signs_) out += s > 0 ? '+' : '-';
        return out;
    }

    friend bool operator==(const SignPattern&, const SignPattern&) = default;

private:
    std::vector<int> signs_;
};

namespace detail {

inline void check_square(const Matrix& x) {
    if (x.rows() != x.cols() || x.rows() == 0)
        throw Error(ErrorCode::invalid_parameter, "expected a nonempty square matrix");
}

inline void check_level(const Matrix& x, int n) {
    check_square(x);
    if (n < 1 || n > x.rows())
        throw Error(ErrorCode::invalid_parameter,
                    "level " + std::to_string(n) + " outside 1.." + std::to_string(x.rows()));
}

} // namespace detail

/// E_n(x) = e_n x e_n: keeps the entries with max(i, j) <= n (1-based).
inline Matrix cond_expect(const Matrix& x, int n) {
    detail::check_level(x, n);
    Matrix out = Matrix::Zero(x.rows(), x.cols());
    out.topLeftCorner(n, n) = x.topLeftCorner(n, n);
    return out;
}

/// d_n x = E_n x - E_{n-1} x, the hook {max(i, j) = n}.
inline Matrix hook_difference(const Matrix& x, int n) {
    detail::check_level(x, n);
    Matrix out = Matrix::Zero(x.rows(), x.cols());
    const Eigen::Index k = n - 1;
    out.row(k).head(n) = x.row(k).head(n);
    out.col(k).head(n) = x.col(k).head(n);
    return out;
}

inline std::vector<Matrix> hook_decomposition(const Matrix& x) {
    detail::check_square(x);
    std::vector<Matrix> d;
    for (int n = 1; n <= x.rows(); ++n) d.push_back(hook_difference(x, n));
    return d;
}

/// T_eps(x) = sum_n eps_n d_n x, i.e. Schur multiplication by eps_{max(i,j)}.
inline Matrix schur_sign_transform(const Matrix& x, const SignPattern& eps) {
    detail::check_square(x);
    if (eps.size() < x.rows())
        throw Error(ErrorCode::invalid_parameter, "sign pattern shorter than the matrix size");
    Matrix out = x;
    for (Eigen::Index j = 0; j < x.cols(); ++j)
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            if (eps(static_cast<int>(std::max(i, j)) + 1) < 0) out(i, j) = -out(i, j);
    return out;
}

enum class Triangle { upper, lower };

/// Upper keeps j >= i, lower keeps j <= i (diagonal in both).
inline Matrix triangular_proj(const Matrix& x, Triangle t) {
    Matrix out = x;
    for (Eigen::Index j = 0; j < x.cols(); ++j)
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            if (t == Triangle::upper ? j < i : j > i) out(i, j) = 0.0;
    return out;
}

struct AverageCheck {
    double deviation = 0.0;  // max |average - lower triangular part| over entries
    long patterns = 0;
    bool approximate = false;  // sampled rather than enumerated
};

/// Average of D_eps T_eps(x) over sign patterns (D_eps = diag(eps)), compared
/// with the lower triangular part. Exhaustive up to 2^cap patterns, sampled beyond.
/// Each D_eps T_eps is a Schur multiplier with +-1 entries, so the multipliers are
/// summed in integers and applied once; the average is then exact.
inline AverageCheck sign_average_check(const Matrix& x, int cap = 12, long samples = 4096, std::uint64_t seed = 1) {
    detail::check_square(x);
    const int n = static_cast<int>(x.rows());
    AverageCheck out;
    Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n, n);
    Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic> sum = Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
    auto add = [&](const SignPattern& eps) {
        Matrix t = schur_sign_transform(ones.cast<Complex>(), eps);
        for (int i = 0; i < n; ++i) t.row(i) *= static_cast<double>(eps(i + 1));
        sum += t.real().cast<long>();
        ++out.patterns;
    };
    if (n <= cap) {
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) add(SignPattern::from_mask(m, n));
    } else {
        out.approximate = true;
        Rng rng = make_rng(seed, 0xa7e);
        std::bernoulli_distribution coin(0.5);
        for (long s = 0; s < samples; ++s) {
            std::vector<int> e(static_cast<std::size_t>(n));
            for (auto& v : e) v = coin(rng) ? 1 : -1;
            add(SignPattern(std::move(e)));
        }
    }
    Matrix avg = (sum.cast<double>() / static_cast<double>(out.patterns)).cast<Complex>().cwiseProduct(x);
    out.deviation = (avg - triangular_proj(x, Triangle::lower)).cwiseAbs().maxCoeff();
    return out;
}

} // namespace opspace::martingale
