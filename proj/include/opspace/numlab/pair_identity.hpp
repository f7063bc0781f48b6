#pragma once

#include <string>
#include <utility>
#include <vector>

#include "opspace/numlab/haagerup.hpp"

namespace opspace::numlab {

struct PairIdentityRecord {
    Exponent u, v, target;
    int size = 0;
    int sample = 0;
    double oracle = 0.0;
    double upper = 0.0;
    double gap = 0.0;              // (upper - oracle) / oracle
    double certificate_gap = 0.0;  // |oracle factor product - oracle| / oracle
    double reconstruction = 0.0;   // oracle factors, relative Frobenius error
    double residual = 0.0;         // optimizer factors, relative Frobenius error
    long iterations = 0;
    bool converged = true;
    bool pass = false;
};

struct PairIdentityOptions {
    double tolerance = 0.005;
    double certificate_tolerance = 1e-10;
    int max_size = 16;
    DescentOptions descent;
};

/// For each (u, v) and each random complex size x size matrix: compares the
/// optimized C_u (x)_h C_v norm with the Schatten norm at 2/(1 - 1/v + 1/u).
inline std::vector<PairIdentityRecord> verify_pair_identity(const std::vector<std::pair<Exponent, Exponent>>& grid,
                                                            int samples, int size, std::uint64_t seed,
                                                            const PairIdentityOptions& opt = {}) {
    if (size < 1 || samples < 1) throw Error(ErrorCode::invalid_parameter, "size and samples must be positive");
    if (size > opt.max_size)
        throw Error(ErrorCode::budget_exceeded,
                    "matrix size " + std::to_string(size) + " exceeds cap " + std::to_string(opt.max_size));
    std::vector<PairIdentityRecord> out;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const auto& [u, v] = grid[g];
        auto spec = pair_factor_spec(u, v);
        for (int s = 0; s < samples; ++s) {
            Rng rng = make_rng(seed, 0x9a1 + g, static_cast<std::uint64_t>(s));
            Matrix x = random_complex(size, size, rng);
            DescentOptions d = opt.descent;
            d.seed = derive_seed(seed, 0x0b7 + g, static_cast<std::uint64_t>(s));
            auto cert = schatten_factor_oracle(x, spec.a, spec.b);
            auto res = factorization_norm(x, spec, d);
            PairIdentityRecord r;
            r.u = u;
            r.v = v;
            r.target = cert.c;
            r.size = size;
            r.sample = s;
            r.oracle = cert.norm.value;
            r.upper = res.estimate.value;
            r.gap = res.gap;
            r.certificate_gap = std::abs(cert.product - r.oracle) / r.oracle;
            r.reconstruction = cert.reconstruction;
            r.residual = res.estimate.residual;
            r.iterations = res.estimate.iterations;
            r.converged = res.estimate.converged;
            r.pass = r.gap <= opt.tolerance && r.gap >= -1e-9 && r.certificate_gap <= opt.certificate_tolerance &&
                     r.reconstruction <= 1e-12;
            out.push_back(r);
        }
    }
    return out;
}

} // namespace opspace::numlab
