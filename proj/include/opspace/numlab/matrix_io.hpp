#pragma once

#include <string>

#include "json.hpp"

#include "opspace/numlab/matrix.hpp"

namespace opspace::numlab {

/// {"rows": r, "cols": c, "entries": [[re, im], ...]} in row-major order.
inline nlohmann::json matrix_to_json(const Matrix& x) {
    nlohmann::json entries = nlohmann::json::array();
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j) entries.push_back({x(i, j).real(), x(i, j).imag()});
    return {{"rows", x.rows()}, {"cols", x.cols()}, {"entries", entries}};
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
    try {
        auto rows = j.at("rows").get<long>(), cols = j.at("cols").get<long>();
        const auto& e = j.at("entries");
        if (rows < 1 || cols < 1) throw Error(ErrorCode::invalid_parameter, "matrix dimensions must be positive");
        if (!e.is_array() || static_cast<long>(e.size()) != rows * cols)
            throw Error(ErrorCode::invalid_parameter, "entry count does not match rows * cols");
        Matrix x(rows, cols);
        for (long k = 0; k < rows * cols; ++k) {
            const auto& z = e[static_cast<std::size_t>(k)];
            if (z.is_number()) x(k / cols, k % cols) = z.get<double>();
            else if (z.is_array() && z.size() == 2) x(k / cols, k % cols) = Complex(z[0].get<double>(), z[1].get<double>());
            else throw Error(ErrorCode::invalid_parameter, "entry " + std::to_string(k) + " is not [re, im]");
        }
        require_finite(x, "matrix");
        return x;
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::invalid_parameter, std::string("malformed matrix: ") + ex.what());
    }
}

} // namespace opspace::numlab
