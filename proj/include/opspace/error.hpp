#pragma once

#include <stdexcept>
#include <string>

namespace opspace {

enum class ErrorCode {
    invalid_parameter,
    not_applicable,
    out_of_range,
    infeasible_budget,
    budget_exceeded,
    parse_error,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::invalid_parameter: return "invalid-parameter";
    case ErrorCode::not_applicable: return "not-applicable";
    case ErrorCode::out_of_range: return "out-of-range";
    case ErrorCode::infeasible_budget: return "infeasible-budget";
    case ErrorCode::budget_exceeded: return "budget-exceeded";
    case ErrorCode::parse_error: return "parse-error";
    }
    return "unknown";
}

/// Exception carrying a machine-readable error category.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Parse failure with the byte offset of the offending token.
class ParseError : public Error {
public:
    ParseError(std::size_t position, const std::string& what)
        : Error(ErrorCode::parse_error, what + " at position " + std::to_string(position)),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

} // namespace opspace
