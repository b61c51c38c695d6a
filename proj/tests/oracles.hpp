#pragma once

// Reference computations used only by the tests. None of these call into the
// library's integrator or closed forms, so they can be trusted to check them.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using P2 = std::array<double, 2>;

inline P2 duffing(const P2& s, double mu) { return {s[1], s[0] - s[0] * s[0] * s[0] - mu * s[1]}; }

inline double energy(const P2& s) {
    return 0.25 * std::pow(s[0], 4) + 0.5 * s[1] * s[1] - 0.5 * s[0] * s[0];
}

/// Jacobian of (x^2 - y^2, 2xy) applied to the original field.
inline P2 pushforward(const P2& s, double mu) {
    const P2 f = duffing(s, mu);
    return {2.0 * s[0] * f[0] - 2.0 * s[1] * f[1], 2.0 * s[1] * f[0] + 2.0 * s[0] * f[1]};
}

/// d/dt atan2(y1, x1 - 1) along the pushed-forward conservative field.
inline double chain_rule_theta_dot(const P2& s) {
    const double x1 = s[0] * s[0] - s[1] * s[1];
    const double y1 = 2.0 * s[0] * s[1];
    const P2 v = pushforward(s, 0.0);
    const double dx = x1 - 1.0;
    return (v[1] * dx - y1 * v[0]) / (dx * dx + y1 * y1);
}

/// Fully expanded polynomial form of the angular velocity.
inline double expanded_theta_dot(double x, double y) {
    const double num = std::pow(x, 6) + std::pow(x, 4) * y * y - 2 * std::pow(x, 4) + std::pow(y, 4) + x * x + y * y;
    const double den = std::pow(x, 4) + 2 * x * x * y * y + std::pow(y, 4) - 2 * x * x + 2 * y * y + 1;
    return -2.0 * num / den;
}

/// H_x x' + H_y y'.
inline double gradient_energy_rate(const P2& s, double mu) {
    const P2 f = duffing(s, mu);
    return (s[0] * s[0] * s[0] - s[0]) * f[0] + s[1] * f[1];
}

/// Classical fixed-step RK4 with a tiny step; the reference flow.
inline P2 flow(P2 s, double mu, double t, double h = 1e-4) {
    const int n = static_cast<int>(std::ceil(t / h));
    const double dt = t / n;
    for (int i = 0; i < n; ++i) {
        const P2 k1 = duffing(s, mu);
        const P2 k2 = duffing({s[0] + 0.5 * dt * k1[0], s[1] + 0.5 * dt * k1[1]}, mu);
        const P2 k3 = duffing({s[0] + 0.5 * dt * k2[0], s[1] + 0.5 * dt * k2[1]}, mu);
        const P2 k4 = duffing({s[0] + dt * k3[0], s[1] + dt * k3[1]}, mu);
        s[0] += dt / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
        s[1] += dt / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
    }
    return s;
}

/// Signed polygon area (shoelace); negative for clockwise loops.
inline double shoelace(const std::vector<P2>& pts) {
    double a = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const P2& p = pts[i];
        const P2& q = pts[(i + 1) % pts.size()];
        a += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * a;
}

/// Period of the conservative orbit through the turning point (x0, 0) of an
/// inner-well orbit (x0 in (1, sqrt 2)) by quadrature of dt = dx / |y| on the
/// half orbit, with the substitution x = a + (b-a) sin^2(phi) removing the
/// endpoint singularities. a, b are the turning points.
inline double well_period(double x_outer) {
    const double h = energy({x_outer, 0.0});
    // turning points: x^2 = 1 +- sqrt(1 + 4h)
    const double a = std::sqrt(1.0 - std::sqrt(1.0 + 4.0 * h));
    const double b = x_outer;
    // y^2 = 2h + x^2 - x^4/2 = (x^2 - a^2)(b^2 - x^2)/2
    const int n = 20000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double phi = (i + 0.5) * (std::numbers::pi / 2) / n;
        const double sn = std::sin(phi);
        const double x = a + (b - a) * sn * sn;
        // dx/dphi / y with the vanishing factors cancelled analytically
        sum += 2.0 / std::sqrt(0.5 * (x + a) * (x + b));
    }
    return 2.0 * sum * (std::numbers::pi / 2) / n;
}

}  // namespace oracle
