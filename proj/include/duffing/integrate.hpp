#pragma once

// Trajectories of the original and the covered Duffing flow, with sheet
// bookkeeping driven by cut-crossing events rather than recomputed pointwise.

#include "duffing/covering.hpp"
#include "duffing/dynamics.hpp"

#include <cstdint>
#include <vector>

namespace duffing {

enum class Method { RK4Fixed, RK45Adaptive };

struct IntegratorConfig {
    Method method = Method::RK45Adaptive;
    double step = 1e-2;  // fixed step, or initial step for the adaptive pair
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    double t_max = 100.0;
    std::int64_t max_steps = 10'000'000;
};

/// Throws InvalidArgument if any field is out of range.
void validate(const IntegratorConfig& cfg);

/// Coordinates a trajectory was advanced in.
enum class Chart { Original, Covered };

enum class EventKind { CutCrossing, SectionReturn };

struct Event {
    double t = 0.0;
    EventKind kind = EventKind::CutCrossing;
    State state;              // original-plane location of the event
    Sheet sheet_after = Sheet::Upper;
    int direction = 0;        // CutCrossing: sign of x'; SectionReturn: sign of y'
};

struct TimedState {
    double t = 0.0;
    State state;
};

struct TimedCoveredState {
    double t = 0.0;
    CoveredState state;
};

/// Hermite node in the integration chart: time, coordinates, derivative.
struct DenseNode {
    double t = 0.0;
    Vec2 y{};
    Vec2 f{};
};

class Trajectory {
public:
    Chart chart = Chart::Original;
    Params params;
    std::vector<TimedState> samples;
    std::vector<TimedCoveredState> covered_samples;
    std::vector<Event> events;
    std::vector<DenseNode> dense;  // one node per sample

    [[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
    [[nodiscard]] double t_begin() const { return samples.front().t; }
    [[nodiscard]] double t_end() const { return samples.back().t; }

    /// Dense output via cubic Hermite interpolation between samples.
    /// Throws InvalidArgument outside [t_begin, t_end].
    [[nodiscard]] State state_at(double t) const;
    [[nodiscard]] CoveredState covered_at(double t) const;

    [[nodiscard]] std::size_t cut_crossings() const noexcept;

private:
    [[nodiscard]] std::size_t segment_of(double t) const;
};

[[nodiscard]] Trajectory integrate_original(const State& s0, const Params& p,
                                            const IntegratorConfig& cfg);

/// Advances covered_field directly. Original-plane samples are reconstructed
/// with inverse_cover and the tracked sheet. Throws BranchPointApproach when
/// the trajectory comes within 1e-10 of the branch point.
[[nodiscard]] Trajectory integrate_covered(const CoveredState& c0, const Params& p,
                                           const IntegratorConfig& cfg);

struct PeriodInfo {
    double first_crossing = 0.0;  // time of the section crossing that starts the period
    double period = 0.0;
};

/// Return time to the section {y = 0} in the crossing direction of the first
/// visit. Requires mu == 0 and a periodic orbit; |H - c| < 1e-9 is rejected
/// with OnSeparatrix. Throws NoReturn when cfg.t_max elapses first.
[[nodiscard]] PeriodInfo find_period_info(const State& s0, const Params& p,
                                          const IntegratorConfig& cfg);

[[nodiscard]] double find_period(const State& s0, const Params& p, const IntegratorConfig& cfg);

inline constexpr double kBranchPointTolerance = 1e-10;
inline constexpr double kSeparatrixTolerance = 1e-9;
inline constexpr double kEventTolerance = 1e-12;
inline constexpr double kMinStep = 1e-14;

}  // namespace duffing
