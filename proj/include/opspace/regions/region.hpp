#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "opspace/error.hpp"
#include "opspace/exponent.hpp"

namespace opspace::regions {

/// A point (1/p, 1/q) of the unit square of reciprocal exponents.
struct ParamPoint {
    Rational x;
    Rational y;

    friend bool operator==(const ParamPoint&, const ParamPoint&) = default;
    std::string str() const { return "(" + to_string(x) + ", " + to_string(y) + ")"; }
};

/// One-parameter family t -> point, t in (0,1), of points known to lie in a region.
enum class Family { diagonal, anti_diagonal, vertical };

inline const char* to_string(Family f) {
    switch (f) {
    case Family::diagonal: return "diagonal (1/p, 1/p)";
    case Family::anti_diagonal: return "anti-diagonal (1/p', 1/p)";
    case Family::vertical: return "vertical (1/2, 1/q)";
    }
    return "?";
}

inline ParamPoint family_point(Family f, const Rational& t) {
    switch (f) {
    case Family::diagonal: return {t, t};
    case Family::anti_diagonal: return {1 - t, t};
    case Family::vertical: return {Rational(1, 2), t};
    }
    return {};
}

enum class Membership { yes, no, unknown };

inline const char* to_string(Membership m) {
    switch (m) {
    case Membership::yes: return "yes";
    case Membership::no: return "no";
    case Membership::unknown: return "unknown";
    }
    return "?";
}

namespace detail {

// Twice the signed area of (o, a, b); positive for a left turn.
inline Rational cross(const ParamPoint& o, const ParamPoint& a, const ParamPoint& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

} // namespace detail

/// Extreme points of the hull, counter-clockwise, starting from the lowest-leftmost.
inline std::vector<ParamPoint> convex_hull(std::vector<ParamPoint> pts) {
    std::sort(pts.begin(), pts.end(), [](const ParamPoint& a, const ParamPoint& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<ParamPoint> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && detail::cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && detail::cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

struct ConvexRegion {
    std::string name;
    std::vector<ParamPoint> vertices;  // counter-clockwise extreme points
    bool interior_only = true;
    // Families whose hull is the region (or, when `lower_bound_only`, a known subset of it).
    std::vector<Family> generators;
    bool lower_bound_only = false;
};

inline ConvexRegion make_region(std::string name, std::vector<ParamPoint> points, bool interior_only) {
    ConvexRegion r;
    r.name = std::move(name);
    r.vertices = convex_hull(std::move(points));
    r.interior_only = interior_only;
    return r;
}

/// S: the open unit square. L: interior of conv{(0,0),(1,1),(1/2,0),(1/2,1)}.
/// T: only its proven part is known, so its vertices are those of L and
/// membership outside L is reported as unknown.
inline ConvexRegion build_region(std::string_view name) {
    const Rational h(1, 2);
    if (name == "S") {
        auto r = make_region("S", {{0, 0}, {1, 0}, {1, 1}, {0, 1}}, true);
        r.generators = {Family::diagonal, Family::anti_diagonal};
        return r;
    }
    if (name == "L" || name == "T") {
        auto r = make_region(std::string(name), {{0, 0}, {1, 1}, {h, 0}, {h, 1}}, true);
        r.generators = {Family::diagonal, Family::vertical};
        r.lower_bound_only = name == "T";
        return r;
    }
    throw Error(ErrorCode::invalid_parameter, "unknown region '" + std::string(name) + "' (expected S, T or L)");
}

/// Exact half-plane test against the stored hull.
inline bool contains(const ConvexRegion& region, const ParamPoint& p) {
    const auto& v = region.vertices;
    if (v.size() < 3) return false;
    for (std::size_t i = 0; i < v.size(); ++i) {
        Rational c = detail::cross(v[i], v[(i + 1) % v.size()], p);
        if (region.interior_only ? c <= 0 : c < 0) return false;
    }
    return true;
}

/// Three-valued query. Regions known only from below answer unknown for points
/// of the open square outside the known part.
inline Membership query(const ConvexRegion& region, const ParamPoint& p) {
    if (contains(region, p)) return Membership::yes;
    if (!region.lower_bound_only) return Membership::no;
    bool in_square = p.x > 0 && p.x < 1 && p.y > 0 && p.y < 1;
    return in_square ? Membership::unknown : Membership::no;
}

struct Certificate {
    std::vector<ParamPoint> points;
    std::vector<Rational> weights;
};

namespace detail {

inline bool combination_matches(const ParamPoint& p, const Certificate& c) {
    Rational x = 0, y = 0, total = 0;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        if (c.weights[i] < 0) return false;
        x += c.weights[i] * c.points[i].x;
        y += c.weights[i] * c.points[i].y;
        total += c.weights[i];
    }
    return total == 1 && x == p.x && y == p.y;
}

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

} // namespace detail

/// Convex weights expressing `p` through `generators` (same length and order),
/// or nothing when `p` is outside their hull. Exact; by Caratheodory at most
/// three weights are nonzero.
inline std::optional<std::vector<Rational>> hull_membership_certificate(const ParamPoint& p,
                                                                         const std::vector<ParamPoint>& generators) {
    if (generators.empty()) throw Error(ErrorCode::invalid_parameter, "no generators");
    const std::size_t n = generators.size();
    auto result = [&](std::initializer_list<std::pair<std::size_t, Rational>> w) {
        std::vector<Rational> out(n, Rational(0));
        for (const auto& [i, wi] : w) out[i] += wi;
        return out;
    };
    for (std::size_t i = 0; i < n; ++i)
        if (generators[i] == p) return result({{i, 1}});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto &a = generators[i], &b = generators[j];
            if (a == b || detail::cross(a, b, p) != 0) continue;
            // p = a + t (b - a); pick the coordinate with nonzero extent
            Rational t = a.x != b.x ? (p.x - a.x) / (b.x - a.x) : (p.y - a.y) / (b.y - a.y);
            if (t >= 0 && t <= 1) return result({{i, 1 - t}, {j, t}});
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                const auto &a = generators[i], &b = generators[j], &c = generators[k];
                Rational area = detail::cross(a, b, c);
                if (area == 0) continue;
                Rational wa = detail::cross(p, b, c) / area;
                Rational wb = detail::cross(a, p, c) / area;
                Rational wc = 1 - wa - wb;
                if (wa >= 0 && wb >= 0 && wc >= 0) return result({{i, wa}, {j, wb}, {k, wc}});
            }
    return std::nullopt;
}

/// Two-point certificate from the region's own generating families, for points
/// of the open region. The weight is the midpoint of the interval that keeps
/// both generators strictly inside the square; solved in closed form and checked exactly before return.
inline std::optional<Certificate> family_certificate(const ConvexRegion& region, const ParamPoint& p) {
    const Rational h(1, 2);
    const auto& [x, y] = p;
    Certificate c;
    if (region.name == "S") {
        if (!contains(region, p)) return std::nullopt;
        // p = lambda (a, a) + (1 - lambda) (1 - s, s)
        Rational lambda = (detail::abs(x + y - 1) + 1 - detail::abs(x - y)) / 2;
        Rational s = (1 - (x - y) / (1 - lambda)) / 2;
        Rational a = (y - (1 - lambda) * s) / lambda;
        c = {{family_point(Family::diagonal, a), family_point(Family::anti_diagonal, s)}, {lambda, 1 - lambda}};
    } else if (region.name == "L" || region.name == "T") {
        if (!contains(region, p)) return std::nullopt;
        // p = lambda (a, a) + (1 - lambda) (1/2, b)
        Rational lambda = (detail::abs(2 * x - 1) + 1 - 2 * detail::abs(y - x)) / 2;
        Rational a = (x - (1 - lambda) * h) / lambda;
        Rational b = (y - x) / (1 - lambda) + h;
        c = {{family_point(Family::diagonal, a), family_point(Family::vertical, b)}, {lambda, 1 - lambda}};
    } else {
        return std::nullopt;
    }
    for (const auto& q : c.points)
        if (q.y <= 0 || q.y >= 1 || q.x <= 0 || q.x >= 1) return std::nullopt;
    if (!detail::combination_matches(p, c)) return std::nullopt;
    return c;
}

} // namespace opspace::regions
