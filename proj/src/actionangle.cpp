#include "duffing/actionangle.hpp"

#include "duffing/error.hpp"

#include <numbers>
#include <string>

namespace duffing {
namespace {

constexpr double kPi = std::numbers::pi;

// Principal value in (-pi, pi].
double fold(double a) {
    while (a <= -kPi) a += 2.0 * kPi;
    while (a > kPi) a -= 2.0 * kPi;
    return a;
}

bool near_center(const State& s) {
    return std::hypot(s.x - 1.0, s.y) < kSingularRadius || std::hypot(s.x + 1.0, s.y) < kSingularRadius;
}

void require_off_center(const State& s) {
    if (near_center(s)) {
        throw Error(ErrorCode::CenterSingular, "angle undefined at the well centres (+-1, 0)");
    }
}

std::vector<Vec2> resample(const Trajectory& traj, double t_end, std::size_t n, bool covered) {
    std::vector<Vec2> pts;
    pts.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = t_end * static_cast<double>(k) / static_cast<double>(n);
        if (covered) {
            pts.push_back(traj.covered_at(t).vec());
        } else {
            pts.push_back(traj.state_at(t).vec());
        }
    }
    return pts;
}

}  // namespace

PolarState to_polar(double x1, double y1) {
    return {std::hypot(x1 - 1.0, y1), theta_of_covered(x1, y1)};
}

CoveredState from_polar(const PolarState& ps, Sheet sheet) {
    return {1.0 + ps.rho * std::cos(ps.theta), ps.rho * std::sin(ps.theta), sheet};
}

double theta_of_covered(double x1, double y1) {
    // The centre-singular disk of radius r about (+-1, 0) maps to a disk of
    // radius ~2r about (1, 0).
    if (std::hypot(x1 - 1.0, y1) < 2.0 * kSingularRadius) {
        throw Error(ErrorCode::CenterSingular, "angle undefined at the covered centre (1, 0)");
    }
    return fold(std::atan2(y1, x1 - 1.0));
}

double theta_of(const State& s) {
    require_off_center(s);
    const CoveredState c = cover_map(s);
    return fold(std::atan2(c.y1, c.x1 - 1.0));
}

double theta_dot_numerator(const State& s) noexcept {
    const double x2 = s.x * s.x;
    const double y2 = s.y * s.y;
    const double w = x2 - 1.0;
    return x2 * w * w + y2 * (x2 * x2 + y2 + 1.0);
}

double theta_dot_denominator(const State& s) noexcept {
    const double x2 = s.x * s.x;
    const double y2 = s.y * s.y;
    const double u = x2 - y2 - 1.0;
    return u * u + 4.0 * x2 * y2;
}

double theta_dot_of(const State& s) {
    require_off_center(s);
    const double num = theta_dot_numerator(s);
    if (num == 0.0) return 0.0;  // origin; avoids -0
    return -2.0 * num / theta_dot_denominator(s);
}

double dH_dtheta(const State& s, const Params& p) {
    require_off_center(s);
    if (std::hypot(s.x, s.y) < kSingularRadius) {
        throw Error(ErrorCode::OriginSingular, "angular velocity vanishes at the saddle");
    }
    return energy_rate(s, p) / theta_dot_of(s);
}

std::vector<TimedAngle> unwrap_theta(const Trajectory& traj) {
    std::vector<TimedAngle> out;
    out.reserve(traj.covered_samples.size());
    double prev_raw = 0.0;
    for (const auto& [t, c] : traj.covered_samples) {
        const double raw = theta_of_covered(c.x1, c.y1);
        if (out.empty()) {
            out.push_back({t, raw});
        } else {
            const double inc = fold(raw - prev_raw);
            if (std::abs(inc) >= kPi) {
                throw Error(ErrorCode::UnwrapAmbiguous,
                            "angle increment of pi between samples at t = " + std::to_string(t));
            }
            out.push_back({t, out.back().theta_unwrapped + inc});
        }
        prev_raw = raw;
    }
    return out;
}

std::vector<EnergyAngleSample> energy_angle_curve(const Trajectory& traj) {
    for (const auto& ts : traj.samples) {
        if (std::hypot(ts.state.x, ts.state.y) < kSingularRadius) {
            throw Error(ErrorCode::OriginSingular,
                        "trajectory sits at the saddle where the angle does not advance");
        }
    }
    const auto angles = unwrap_theta(traj);
    std::vector<EnergyAngleSample> out;
    out.reserve(angles.size());
    for (std::size_t i = 0; i < angles.size(); ++i) {
        out.push_back({angles[i].theta_unwrapped, hamiltonian(traj.samples[i].state, traj.params)});
    }
    return out;
}

double loop_integral_y_dx(const std::vector<Vec2>& points) {
    double sum = 0.0;
    const std::size_t n = points.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Vec2& a = points[k];
        const Vec2& b = points[(k + 1) % n];
        sum += 0.5 * (a[1] + b[1]) * (b[0] - a[0]);
    }
    return sum;
}

CoveredLoop covered_loop(const State& s0, const Params& p, const IntegratorConfig& cfg,
                         std::size_t n_samples) {
    if (n_samples < 3) throw Error(ErrorCode::InvalidArgument, "need at least 3 loop samples");
    const double period = find_period(s0, p, cfg);

    // One original period holds one (H < 0) or two (H > 0) revolutions; the
    // margin keeps the target angle inside the integrated span.
    IntegratorConfig run_cfg = cfg;
    run_cfg.t_max = 1.01 * period;
    const Trajectory traj = integrate_covered(cover_map(s0), p, run_cfg);
    const auto angles = unwrap_theta(traj);
    const double target = angles.front().theta_unwrapped - 2.0 * kPi;

    std::size_t i = 1;
    while (i < angles.size() && angles[i].theta_unwrapped > target) ++i;
    if (i == angles.size()) {
        throw Error(ErrorCode::NoReturn, "theta did not complete a revolution within one period");
    }

    const double base = angles[i - 1].theta_unwrapped;
    const double base_raw = theta_of_covered(traj.covered_samples[i - 1].state.x1,
                                             traj.covered_samples[i - 1].state.y1);
    const auto excess = [&](double t) {
        const CoveredState c = traj.covered_at(t);
        return base + fold(theta_of_covered(c.x1, c.y1) - base_raw) - target;
    };
    double lo = angles[i - 1].t;
    double hi = angles[i].t;
    for (int it = 0; it < 100 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (excess(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    CoveredLoop loop;
    loop.revolution_time = 0.5 * (lo + hi);
    loop.points = resample(traj, loop.revolution_time, n_samples, true);
    loop.action = std::abs(loop_integral_y_dx(loop.points)) / (2.0 * kPi);
    return loop;
}

double action_covered(const State& s0, const Params& p, const IntegratorConfig& cfg) {
    return covered_loop(s0, p, cfg).action;
}

double action_original(const State& s0, const Params& p, const IntegratorConfig& cfg) {
    const double period = find_period(s0, p, cfg);
    IntegratorConfig run_cfg = cfg;
    run_cfg.t_max = period;
    const Trajectory traj = integrate_original(s0, p, run_cfg);
    const auto pts = resample(traj, period, kActionSamples, false);
    return std::abs(loop_integral_y_dx(pts)) / (2.0 * kPi);
}

}  // namespace duffing
