#pragma once

#include <cmath>
#include <map>
#include <numbers>

#include "opspace/numlab/schatten.hpp"

namespace opspace::martingale {

using numlab::Complex;
using numlab::Matrix;

/// Finite sum of x_n z^n with matrix coefficients, z on the unit circle.
class TrigPolynomial {
public:
    TrigPolynomial() = default;
    TrigPolynomial(Eigen::Index rows, Eigen::Index cols) : rows_(rows), cols_(cols) {}

    void set(int n, Matrix x) {
        if (coeffs_.empty() && rows_ == 0) rows_ = x.rows(), cols_ = x.cols();
        if (x.rows() != rows_ || x.cols() != cols_)
            throw Error(ErrorCode::invalid_parameter, "coefficient shape mismatch");
        coeffs_[n] = std::move(x);
    }

    const std::map<int, Matrix>& coefficients() const { return coeffs_; }
    Eigen::Index rows() const { return rows_; }
    Eigen::Index cols() const { return cols_; }

    Matrix coefficient(int n) const {
        auto it = coeffs_.find(n);
        return it == coeffs_.end() ? Matrix(Matrix::Zero(rows_, cols_)) : it->second;
    }

    /// Largest |n| with a stored coefficient.
    int degree() const {
        int d = 0;
        for (const auto& [n, _] : coeffs_) d = std::max(d, std::abs(n));
        return d;
    }

    Matrix evaluate(Complex z) const {
        Matrix out = Matrix::Zero(rows_, cols_);
        for (const auto& [n, x] : coeffs_) out += std::pow(z, n) * x;
        return out;
    }

    friend bool operator==(const TrigPolynomial& a, const TrigPolynomial& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
        auto nonzero = [](const TrigPolynomial& t) {
            std::map<int, Matrix> m;
            for (const auto& [n, x] : t.coeffs_)
                if (x.norm() != 0.0) m.emplace(n, x);
            return m;
        };
        return nonzero(a) == nonzero(b);
    }

private:
    Eigen::Index rows_ = 0, cols_ = 0;
    std::map<int, Matrix> coeffs_;
};

/// Drops the negative frequencies.
inline TrigPolynomial riesz_projection(const TrigPolynomial& f) {
    TrigPolynomial out(f.rows(), f.cols());
    for (const auto& [n, x] : f.coefficients())
        if (n >= 0) out.set(n, x);
    return out;
}

/// Number of equispaced nodes used for a polynomial of degree d.
inline int quadrature_nodes(int degree) { return 8 * (degree + 1); }

inline std::vector<Complex> unit_roots(int k) {
    std::vector<Complex> w(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) w[static_cast<std::size_t>(j)] = std::polar(1.0, 2.0 * std::numbers::pi * j / k);
    return w;
}

/// L_p(T; S_p) norm by the trapezoid rule on the roots of unity.
inline double lp_norm(const TrigPolynomial& f, double p, int nodes = 0) {
    if (nodes <= 0) nodes = quadrature_nodes(f.degree());
    double sum = 0.0, top = 0.0;
    std::vector<double> vals;
    for (Complex z : unit_roots(nodes)) vals.push_back(numlab::schatten_norm(f.evaluate(z), p));
    for (double v : vals) top = std::max(top, v);
    if (top == 0.0 || std::isinf(p)) return top;
    for (double v : vals) sum += std::pow(v / top, p);
    return top * std::pow(sum / nodes, 1.0 / p);
}

} // namespace opspace::martingale
