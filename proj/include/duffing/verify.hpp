#pragma once

// Numerical oracles packaged as diagnostic checks. Each check compares a
// closed-form quantity of the library against an independent route (chain
// rule, Jacobian pushforward, direct integration) and returns a report
// rather than asserting.

#include "duffing/integrate.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace duffing::verify {

struct CheckReport {
    std::string name;
    std::int64_t n_samples = 0;
    double max_abs_error = 0.0;
    double max_rel_error = 0.0;
    bool passed = false;
    double tolerance = 0.0;
};

/// 64-bit LCG (Knuth's MMIX constants); uniform doubles come from the top 53
/// bits so sample streams are identical across standard libraries.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    [[nodiscard]] double uniform(double lo, double hi) {
        const auto bits = engine_() >> 11;
        return lo + (hi - lo) * (static_cast<double>(bits) * 0x1.0p-53);
    }

    [[nodiscard]] State state_in(double lo, double hi) {
        const double x = uniform(lo, hi);
        return {x, uniform(lo, hi)};
    }

private:
    std::linear_congruential_engine<std::uint64_t, 6364136223846793005ULL, 1442695040888963407ULL, 0>
        engine_;
};

inline constexpr double kSampleBox = 3.0;  // states drawn from [-3, 3]^2

inline constexpr double kPushforwardTolerance = 1e-10;
inline constexpr double kThetaDotTolerance = 1e-10;
inline constexpr double kThetaDotExclusion = 1e-3;
inline constexpr double kConservationTolerance = 1e-8;
inline constexpr double kWindingTolerance = 1e-6;
inline constexpr double kRoundTripTolerance = 1e-12;
inline constexpr double kEnergyRateTolerance = 1e-12;

/// covered_field(cover_map(s)) against J(s) * duffing_field(s); absolute error.
[[nodiscard]] CheckReport check_pushforward(std::int64_t n, double mu, std::uint64_t seed,
                                            double tolerance = kPushforwardTolerance);

/// Closed-form theta' against d/dt atan2(y1, x1 - 1) along covered_field;
/// relative error. Samples within 1e-3 of (+-1, 0) are skipped (n_samples
/// counts only compared points); (0, 1) -> -1 and (2, 0) -> -8 are pinned.
[[nodiscard]] CheckReport check_theta_dot(std::int64_t n, std::uint64_t seed,
                                          double tolerance = kThetaDotTolerance);

/// Largest |H(t) - H(0)| over one conservative orbit per energy level.
/// Levels within 1e-9 of the separatrix raise OnSeparatrix.
[[nodiscard]] CheckReport check_conservation(const std::vector<double>& h_levels, double t_max,
                                             double tolerance = kConservationTolerance);

/// Unwrapped angle change over one measured period: -2pi below the
/// separatrix, -4pi above it.
[[nodiscard]] CheckReport check_winding(const std::vector<double>& h_levels,
                                        double tolerance = kWindingTolerance);

/// inverse_cover(cover_map(s)) == s componentwise.
[[nodiscard]] CheckReport check_round_trip(std::int64_t n, std::uint64_t seed,
                                           double tolerance = kRoundTripTolerance);

/// energy_rate against the gradient product H_x x' + H_y y', and dH_dtheta
/// against that product over the chain-rule angular velocity.
[[nodiscard]] CheckReport check_energy_rate(std::int64_t n, double mu, std::uint64_t seed,
                                            double tolerance = kEnergyRateTolerance);

struct CheckOptions {
    std::uint64_t seed = 42;
    std::optional<double> tolerance;  // overrides every check's default bound
};

struct CheckEntry {
    std::string name;                 // function name, matched by --only
    std::vector<std::string> covers;  // closed-form operations exercised
    std::function<CheckReport(const CheckOptions&)> run;
};

/// Closed-form operations the library exposes.
[[nodiscard]] const std::vector<std::string>& exposed_formulas();

/// The default verification suite, in run order.
[[nodiscard]] const std::vector<CheckEntry>& default_checks();

/// Reports of every default check whose name equals `only` (all if empty).
[[nodiscard]] std::vector<CheckReport> run_checks(const CheckOptions& opts, const std::string& only = "");

/// Single-line JSON object with the CheckReport fields as snake_case keys.
[[nodiscard]] std::string to_json_line(const CheckReport& report);

}  // namespace duffing::verify
