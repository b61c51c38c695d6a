#pragma once

// Unforced Duffing oscillator with linear damping:
//
//   x' = y
//   y' = x - x^3 - mu*y
//
// and its energy H = x^4/4 + y^2/2 - x^2/2 + c. With c = 0 the figure-eight
// separatrix is the level H = 0 and the two well bottoms sit at H = -1/4.

#include <array>
#include <cmath>
#include <vector>

namespace duffing {

using Vec2 = std::array<double, 2>;

struct State {
    double x = 0.0;
    double y = 0.0;

    [[nodiscard]] constexpr Vec2 vec() const noexcept { return {x, y}; }
    [[nodiscard]] static constexpr State from(const Vec2& v) noexcept { return {v[0], v[1]}; }
    [[nodiscard]] constexpr State operator-() const noexcept { return {-x, -y}; }
    friend constexpr bool operator==(const State&, const State&) = default;
};

struct Params {
    double mu = 0.0;  // damping, >= 0
    double c = 0.0;   // additive energy constant
};

[[nodiscard]] inline bool is_finite(const State& s) noexcept {
    return std::isfinite(s.x) && std::isfinite(s.y);
}

/// Throws InvalidArgument for non-finite states or mu < 0.
void require_valid(const State& s, const Params& p);

[[nodiscard]] Vec2 duffing_field(const State& s, const Params& p);

[[nodiscard]] double hamiltonian(const State& s, const Params& p);

/// dH/dt along the damped flow.
///
/// H_x * x' + H_y * y' = (x^3 - x) * y + y * (x - x^3 - mu*y) = -mu * y^2.
/// The cubic terms cancel identically, so the closed form is exact and the
/// rate vanishes for mu = 0 without any rounding residue.
[[nodiscard]] double energy_rate(const State& s, const Params& p);

/// Saddle at the origin and the two well centres (+-1, 0), independent of mu.
[[nodiscard]] std::vector<State> fixed_points(const Params& p);

/// A convenient point on the level set H - c = h: on the positive x axis
/// beyond the right well for -1/4 <= h < 0, on the positive y axis for h >= 0.
/// Throws InvalidArgument for h < -1/4.
[[nodiscard]] State state_on_level(double h, const Params& p = {});

}  // namespace duffing
