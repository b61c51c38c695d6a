#include "duffing/dynamics.hpp"

#include "duffing/error.hpp"

#include <string>

namespace duffing {

void require_valid(const State& s, const Params& p) {
    if (!is_finite(s)) {
        throw Error(ErrorCode::InvalidArgument, "state must be finite");
    }
    if (!(p.mu >= 0.0) || !std::isfinite(p.mu) || !std::isfinite(p.c)) {
        throw Error(ErrorCode::InvalidArgument, "mu must be finite and >= 0, c finite");
    }
}

Vec2 duffing_field(const State& s, const Params& p) {
    return {s.y, s.x - s.x * s.x * s.x - p.mu * s.y};
}

double hamiltonian(const State& s, const Params& p) {
    const double x2 = s.x * s.x;
    return 0.25 * x2 * x2 + 0.5 * s.y * s.y - 0.5 * x2 + p.c;
}

double energy_rate(const State& s, const Params& p) {
    return -p.mu * s.y * s.y;
}

std::vector<State> fixed_points(const Params&) {
    return {{0.0, 0.0}, {1.0, 0.0}, {-1.0, 0.0}};
}

State state_on_level(double h, const Params&) {
    if (!std::isfinite(h) || h < -0.25) {
        throw Error(ErrorCode::InvalidArgument,
                    "energy level " + std::to_string(h) + " is below the well minimum -1/4");
    }
    if (h < 0.0) {
        // x^4/4 - x^2/2 = h  =>  x^2 = 1 + sqrt(1 + 4h), outer turning point
        return {std::sqrt(1.0 + std::sqrt(1.0 + 4.0 * h)), 0.0};
    }
    return {0.0, std::sqrt(2.0 * h)};
}

}  // namespace duffing
