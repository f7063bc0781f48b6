#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <ostream>
#include <string>
#include <string_view>

#include "opspace/error.hpp"

namespace opspace {

using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& r) { return r.str(); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Parses "a/b" or an integer into an exact rational.
inline Rational parse_rational(std::string_view text) {
    auto is_int = [](std::string_view s) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        return true;
    };
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
    if (!is_int(num) || !is_int(den))
        throw Error(ErrorCode::invalid_parameter, "not a rational: '" + std::string(text) + "'");
    boost::multiprecision::cpp_int n(std::string(num[0] == '+' ? num.substr(1) : num));
    boost::multiprecision::cpp_int d(std::string(den[0] == '+' ? den.substr(1) : den));
    if (d == 0) throw Error(ErrorCode::invalid_parameter, "zero denominator in '" + std::string(text) + "'");
    return Rational(n, d);
}

/// Extended Lebesgue index p in [1, inf], stored as the exact reciprocal 1/p in [0, 1].
class Exponent {
public:
    Exponent() = default;

    static Exponent from_reciprocal(Rational reciprocal) {
        if (reciprocal < 0 || reciprocal > 1)
            throw Error(ErrorCode::invalid_parameter,
                        "exponent reciprocal " + to_string(reciprocal) + " outside [0,1]");
        Exponent e;
        e.reciprocal_ = std::move(reciprocal);
        return e;
    }

    static Exponent from_value(const Rational& p) {
        if (p < 1) throw Error(ErrorCode::invalid_parameter, "exponent " + to_string(p) + " below 1");
        return from_reciprocal(1 / p);
    }

    static Exponent infinity() { return from_reciprocal(0); }
    static Exponent one() { return from_reciprocal(1); }

    /// Accepts "inf", "a/b" or an integer.
    static Exponent parse(std::string_view text) {
        if (text == "inf" || text == "infinity") return infinity();
        return from_value(parse_rational(text));
    }

    const Rational& reciprocal() const noexcept { return reciprocal_; }
    bool is_infinite() const { return reciprocal_ == 0; }
    bool is_one() const { return reciprocal_ == 1; }
    /// 1 < p < inf
    bool is_strict() const { return reciprocal_ > 0 && reciprocal_ < 1; }

    /// Exact value p; only meaningful for finite exponents.
    Rational value() const {
        if (is_infinite()) throw Error(ErrorCode::invalid_parameter, "infinite exponent has no finite value");
        return 1 / reciprocal_;
    }

    double to_double() const {
        return is_infinite() ? std::numeric_limits<double>::infinity() : 1.0 / opspace::to_double(reciprocal_);
    }
    double reciprocal_double() const { return opspace::to_double(reciprocal_); }

    Exponent conjugate() const { return from_reciprocal(1 - reciprocal_); }

    std::string str() const { return is_infinite() ? std::string("inf") : to_string(value()); }

    friend bool operator==(const Exponent& a, const Exponent& b) { return a.reciprocal_ == b.reciprocal_; }
    friend bool operator!=(const Exponent& a, const Exponent& b) { return !(a == b); }
    /// Orders by the index p, so larger reciprocal compares smaller.
    friend bool operator<(const Exponent& a, const Exponent& b) { return a.reciprocal_ > b.reciprocal_; }

    friend std::ostream& operator<<(std::ostream& os, const Exponent& e) { return os << e.str(); }

private:
    Rational reciprocal_{0};
};

/// 1/p_theta = (1-theta)/p0 + theta/p1, exact.
inline Exponent interp_exponent(const Exponent& p0, const Exponent& p1, const Rational& theta) {
    if (theta <= 0 || theta >= 1)
        throw Error(ErrorCode::invalid_parameter, "interpolation parameter " + to_string(theta) + " outside (0,1)");
    return Exponent::from_reciprocal((1 - theta) * p0.reciprocal() + theta * p1.reciprocal());
}

} // namespace opspace
