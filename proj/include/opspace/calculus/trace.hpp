#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "opspace/calculus/space_expr.hpp"

namespace opspace::calculus {

/// Strength of an identification; declared weakest first so that `<` means "weaker".
enum class EquivalenceLevel { isomorphic = 0, isometric = 1, completely_isometric = 2 };

inline const char* to_string(EquivalenceLevel level) {
    switch (level) {
    case EquivalenceLevel::isomorphic: return "isomorphic";
    case EquivalenceLevel::isometric: return "isometric";
    case EquivalenceLevel::completely_isometric: return "completely-isometric";
    }
    return "?";
}

inline EquivalenceLevel parse_level(std::string_view text) {
    if (text == "completely-isometric" || text == "ci" || text == "complete")
        return EquivalenceLevel::completely_isometric;
    if (text == "isometric" || text == "iso") return EquivalenceLevel::isometric;
    if (text == "isomorphic") return EquivalenceLevel::isomorphic;
    throw Error(ErrorCode::invalid_parameter, "unknown equivalence level '" + std::string(text) + "'");
}

struct TraceStep {
    std::string rule;
    SpaceExpr before;
    SpaceExpr after;
    EquivalenceLevel level = EquivalenceLevel::completely_isometric;
    std::string citation;
    std::string note;        // parameters fixed by the step, e.g. "theta=3/4"
    bool embedding = false;  // `after` contains `before` isometrically rather than equals it
};

class DerivationTrace {
public:
    DerivationTrace() = default;
    explicit DerivationTrace(SpaceExpr start) : start_(std::move(start)) {}

    void push(TraceStep step) {
        if (steps_.empty() && !start_) start_ = step.before;
        steps_.push_back(std::move(step));
    }

    /// Expression at the end of the chain.
    const SpaceExpr& current() const {
        if (!steps_.empty()) return steps_.back().after;
        if (!start_) throw Error(ErrorCode::invalid_parameter, "trace has no start expression");
        return *start_;
    }

    /// Appends a step starting at the current end of the chain.
    void push(std::string rule, SpaceExpr after, EquivalenceLevel level, std::string citation,
              std::string note = {}, bool embedding = false) {
        push(TraceStep{std::move(rule), current(), std::move(after), level, std::move(citation),
                       std::move(note), embedding});
    }

    const std::vector<TraceStep>& steps() const noexcept { return steps_; }
    bool empty() const noexcept { return steps_.empty(); }
    std::size_t size() const noexcept { return steps_.size(); }

    /// Weakest level over all steps; an empty trace is an identity.
    EquivalenceLevel level() const {
        EquivalenceLevel out = EquivalenceLevel::completely_isometric;
        for (const auto& s : steps_) out = std::min(out, s.level);
        return out;
    }

    bool has_embedding() const {
        return std::any_of(steps_.begin(), steps_.end(), [](const TraceStep& s) { return s.embedding; });
    }

    /// after(k) == before(k+1) for all k.
    bool is_chained() const {
        for (std::size_t k = 1; k < steps_.size(); ++k)
            if (steps_[k - 1].after != steps_[k].before) return false;
        return true;
    }

    bool uses_rule(std::string_view rule) const {
        return std::any_of(steps_.begin(), steps_.end(), [&](const TraceStep& s) { return s.rule == rule; });
    }

private:
    std::optional<SpaceExpr> start_;
    std::vector<TraceStep> steps_;
};

} // namespace opspace::calculus
