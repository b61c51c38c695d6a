#pragma once

// Global angle about the covered-plane centre (1, 0), where both well centres
// (+-1, 0) land. Every orbit other than the saddle rotates clockwise about
// that single point, so the angle serves as a global clock; energy (and with
// it the action) is the conjugate coordinate.

#include "duffing/integrate.hpp"

#include <vector>

namespace duffing {

struct PolarState {
    double rho = 0.0;    // distance from (1, 0) in the covered plane
    double theta = 0.0;  // in (-pi, pi]
};

struct EnergyAngleSample {
    double theta_unwrapped = 0.0;
    double h = 0.0;
};

struct TimedAngle {
    double t = 0.0;
    double theta_unwrapped = 0.0;
};

/// Radius of the exclusion disks around (+-1, 0) and the origin.
inline constexpr double kSingularRadius = 1e-9;

[[nodiscard]] PolarState to_polar(double x1, double y1);
[[nodiscard]] CoveredState from_polar(const PolarState& ps, Sheet sheet);

/// atan2(y1, x1 - 1) with the range folded to (-pi, pi]. Throws
/// CenterSingular inside the exclusion disk around the centre.
[[nodiscard]] double theta_of_covered(double x1, double y1);
[[nodiscard]] double theta_of(const State& s);

/// Numerator and denominator of the closed-form angular velocity
///
///   theta' = -2 (x^6 + x^4 y^2 - 2x^4 + y^4 + x^2 + y^2)
///             / (x^4 + 2x^2 y^2 + y^4 - 2x^2 + 2y^2 + 1),
///
/// evaluated in the equivalent sum-of-squares forms
/// x^2 (x^2 - 1)^2 + y^2 (x^4 + y^2 + 1) and (x^2 - y^2 - 1)^2 + 4 x^2 y^2,
/// which keeps full relative accuracy next to the centre-singular points.
[[nodiscard]] double theta_dot_numerator(const State& s) noexcept;
[[nodiscard]] double theta_dot_denominator(const State& s) noexcept;

/// Conservative angular velocity. Zero at the origin, negative elsewhere;
/// CenterSingular at (+-1, 0).
[[nodiscard]] double theta_dot_of(const State& s);

/// Energy change per unit of angle, -mu y^2 / theta' >= 0.
/// CenterSingular at (+-1, 0), OriginSingular at the origin.
[[nodiscard]] double dH_dtheta(const State& s, const Params& p);

/// Continuous angle along the trajectory samples. Each principal-value
/// increment is shifted by a multiple of 2*pi into (-pi, pi]; an increment of
/// exactly +-pi cannot be attributed to a direction and raises UnwrapAmbiguous.
[[nodiscard]] std::vector<TimedAngle> unwrap_theta(const Trajectory& traj);

/// (theta_unwrapped, H) at every sample. Trajectories touching the origin,
/// where the angle stops advancing, are rejected with OriginSingular.
[[nodiscard]] std::vector<EnergyAngleSample> energy_angle_curve(const Trajectory& traj);

/// Closed covered loop over one full turn of theta (from the start point
/// until theta has decreased by exactly 2*pi), resampled uniformly in time.
struct CoveredLoop {
    std::vector<Vec2> points;  // first point not repeated at the end
    double revolution_time = 0.0;
    double action = 0.0;       // |loop integral of y1 dx1| / (2 pi)
};

inline constexpr std::size_t kActionSamples = 4096;

[[nodiscard]] CoveredLoop covered_loop(const State& s0, const Params& p, const IntegratorConfig& cfg,
                                       std::size_t n_samples = kActionSamples);

/// Action of the global representation: (1/2pi) of the loop integral of
/// y1 dx1 over one revolution of theta in the covered plane.
[[nodiscard]] double action_covered(const State& s0, const Params& p, const IntegratorConfig& cfg);

/// Classical action (1/2pi) of the loop integral of y dx over one period.
[[nodiscard]] double action_original(const State& s0, const Params& p, const IntegratorConfig& cfg);

/// Trapezoid rule for the closed loop integral of v dx over the polygon
/// through `points` (closing segment included).
[[nodiscard]] double loop_integral_y_dx(const std::vector<Vec2>& points);

}  // namespace duffing
