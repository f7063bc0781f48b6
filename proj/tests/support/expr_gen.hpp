#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "opspace/calculus/rewrite.hpp"

namespace opspace::testing {

using calculus::EquivalenceLevel;
using calculus::RuleId;
using calculus::SpaceExpr;

class ExprGen {
public:
    explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

    SpaceExpr operator()(int depth) {
        int pick = uniform(0, depth <= 0 ? 3 : 9);
        switch (pick) {
        case 0: return SpaceExpr::column(exponent());
        case 1: return SpaceExpr::row(exponent());
        case 2: return SpaceExpr::schatten(exponent());
        case 3: return uniform(0, 4) == 0 ? SpaceExpr::scalar() : SpaceExpr::column(exponent());
        case 4:
        case 5: {
            std::vector<SpaceExpr> f;
            int n = uniform(2, 4);
            for (int i = 0; i < n; ++i) f.push_back((*this)(depth - 1));
            return SpaceExpr::tensor(f);
        }
        case 6: return SpaceExpr::interp((*this)(depth - 1), (*this)(depth - 1), Rational(uniform(1, 4), 5));
        case 7: return SpaceExpr::dual((*this)(depth - 1));
        case 8: return SpaceExpr::opposite((*this)(depth - 1));
        default: return SpaceExpr::vector_schatten(exponent(), (*this)(depth - 1));
        }
    }

    std::mt19937_64& rng() { return rng_; }

private:
    int uniform(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
    Exponent exponent() {
        static const char* pool[] = {"1", "4/3", "3/2", "2", "3", "4", "inf"};
        return Exponent::parse(pool[uniform(0, 6)]);
    }
    std::mt19937_64 rng_;
};

// Priority orders that keep the tier order of the target but shuffle within tiers.
inline std::vector<std::vector<RuleId>> shuffled_priorities(EquivalenceLevel target, std::mt19937_64& rng, int count) {
    std::vector<RuleId> ci{RuleId::R1, RuleId::R2, RuleId::R4, RuleId::R5, RuleId::R6, RuleId::R8};
    std::vector<RuleId> iso{RuleId::R3, RuleId::R7};
    std::vector<std::vector<RuleId>> out;
    for (int k = 0; k < count; ++k) {
        std::shuffle(ci.begin(), ci.end(), rng);
        std::shuffle(iso.begin(), iso.end(), rng);
        std::vector<RuleId> order;
        if (target == EquivalenceLevel::isometric) order = iso;
        order.insert(order.end(), ci.begin(), ci.end());
        out.push_back(order);
    }
    return out;
}

} // namespace opspace::testing
