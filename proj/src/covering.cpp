#include "duffing/covering.hpp"

#include "duffing/error.hpp"

namespace duffing {

Sheet sheet_of(const State& s) noexcept {
    if (s.x > 0.0) return Sheet::Upper;
    if (s.x < 0.0) return Sheet::Lower;
    return s.y < 0.0 ? Sheet::Lower : Sheet::Upper;
}

CoveredState cover_map(const State& s) {
    return {s.x * s.x - s.y * s.y, 2.0 * s.x * s.y, sheet_of(s)};
}

State inverse_cover(const CoveredState& c) {
    const double r = covered_radius(c.x1, c.y1);
    if (r == 0.0) return {0.0, 0.0};

    // Root on the Upper sheet (x > 0, or x == 0 with y > 0). Each branch takes
    // the square root of a sum of non-negative terms to avoid cancellation.
    State root;
    if (c.x1 >= 0.0) {
        root.x = std::sqrt(0.5 * (r + c.x1));
        root.y = c.y1 / (2.0 * root.x);
    } else {
        const double t = std::sqrt(0.5 * (r - c.x1));
        root.y = cut_side_positive(c.y1) ? t : -t;
        root.x = c.y1 / (2.0 * root.y) + 0.0;  // +0.0 folds -0 into +0
    }
    return c.sheet == Sheet::Upper ? root : -root;
}

Vec2 covered_field(const CoveredState& c, const Params& p) {
    const double x1 = c.x1;
    const double y1 = c.y1;
    const double r = covered_radius(x1, y1);
    return {0.5 * (x1 + r) * y1 + p.mu * (r - x1),
            -x1 * x1 - 0.5 * y1 * y1 + r * (2.0 - x1) - p.mu * y1};
}

std::optional<double> crosses_cut(const Vec2& a, const Vec2& b, double branch_tol) {
    if (cut_side_positive(a[1]) == cut_side_positive(b[1])) return std::nullopt;
    const double lambda = a[1] / (a[1] - b[1]);
    const double x1 = a[0] + lambda * (b[0] - a[0]);
    if (std::abs(x1) <= branch_tol) {
        throw Error(ErrorCode::DegenerateCrossing,
                    "segment passes through the branch point of the covering");
    }
    if (x1 > 0.0) return std::nullopt;
    return lambda;
}

}  // namespace duffing
