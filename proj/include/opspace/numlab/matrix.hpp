#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "opspace/error.hpp"
#include "opspace/exponent.hpp"
#include "opspace/random.hpp"

namespace opspace::numlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;

enum class EstimateKind { exact, upper, lower };

inline const char* to_string(EstimateKind k) {
    switch (k) {
    case EstimateKind::exact: return "exact";
    case EstimateKind::upper: return "upper";
    case EstimateKind::lower: return "lower";
    }
    return "?";
}

struct NormEstimate {
    double value = 0.0;
    EstimateKind kind = EstimateKind::exact;
    std::uint64_t seed = 0;
    int restarts = 0;
    long iterations = 0;
    double residual = 0.0;
    bool converged = true;
};

inline NormEstimate exact_value(double v) {
    NormEstimate e;
    e.value = v;
    return e;
}

/// Entries i.i.d. standard complex Gaussian (real and imaginary parts N(0, 1/2)).
inline Matrix random_complex(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex(g(rng), g(rng));
    return m;
}

inline void require_finite(const Matrix& x, const char* what) {
    if (!x.allFinite()) throw Error(ErrorCode::invalid_parameter, std::string(what) + " has non-finite entries");
}

} // namespace opspace::numlab
