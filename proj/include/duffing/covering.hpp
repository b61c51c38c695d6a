#pragma once

// Double covering of the phase plane by complex squaring,
//
//   x1 + i*y1 = (x + i*y)^2,
//
// which identifies s and -s. Two sheets keep the map one-to-one: the right
// half-plane lands on the Upper sheet, the left half-plane on the Lower one,
// and the sheets are glued along the cut {y1 = 0, x1 < 0} (the image of the
// y axis).
//
// Cut ownership: (0, y) with y > 0 is Upper, (0, y) with y < 0 is Lower.
// Either way the cut point is the y1 -> 0+ limit of its sheet, so a covered
// trajectory changes sheet exactly when y1 changes sign with y1 = 0 counted
// as positive while x1 < 0. The branch point (0, 0) is tagged Upper.

#include "duffing/dynamics.hpp"

#include <optional>

namespace duffing {

enum class Sheet { Upper, Lower };

[[nodiscard]] constexpr Sheet toggle_sheet(Sheet s) noexcept {
    return s == Sheet::Upper ? Sheet::Lower : Sheet::Upper;
}

[[nodiscard]] constexpr char sheet_letter(Sheet s) noexcept {
    return s == Sheet::Upper ? 'U' : 'L';
}

struct CoveredState {
    double x1 = 0.0;
    double y1 = 0.0;
    Sheet sheet = Sheet::Upper;

    [[nodiscard]] constexpr Vec2 vec() const noexcept { return {x1, y1}; }
    friend constexpr bool operator==(const CoveredState&, const CoveredState&) = default;
};

/// Sheet assigned to an original-plane point (cut and branch conventions above).
[[nodiscard]] Sheet sheet_of(const State& s) noexcept;

[[nodiscard]] CoveredState cover_map(const State& s);

/// Square root of x1 + i*y1 picked by sheet. The tag is ignored at (0, 0).
[[nodiscard]] State inverse_cover(const CoveredState& c);

/// sqrt(x1^2 + y1^2), which equals x^2 + y^2 of the preimage.
[[nodiscard]] inline double covered_radius(double x1, double y1) noexcept {
    return std::hypot(x1, y1);
}

/// Pushforward of the damped Duffing field, closed in (x1, y1):
///
///   x1' = (x1 + R) y1 / 2 + mu (R - x1)
///   y1' = -x1^2 - y1^2 / 2 + R (2 - x1) - mu y1,   R = sqrt(x1^2 + y1^2)
///
/// The sheet tag does not enter.
[[nodiscard]] Vec2 covered_field(const CoveredState& c, const Params& p);

/// Crossing of the cut by the straight segment a -> b in the covered plane.
/// Returns the fraction lambda of the linear sign change of y1 when the
/// interpolated x1 there is negative. Throws DegenerateCrossing when that
/// point lies within `branch_tol` of the branch point.
[[nodiscard]] std::optional<double> crosses_cut(const Vec2& a, const Vec2& b,
                                                double branch_tol = 1e-10);

/// Sign used for cut bookkeeping: y1 == 0 counts as the positive side.
[[nodiscard]] constexpr bool cut_side_positive(double y1) noexcept { return y1 >= 0.0; }

}  // namespace duffing
