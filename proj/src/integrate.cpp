#include "duffing/integrate.hpp"

#include "duffing/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace duffing {
namespace {

struct Step {
    double t0, t1;
    Vec2 y0, y1, f0, f1;
};

Vec2 axpy(const Vec2& y, double h, const Vec2& k) { return {y[0] + h * k[0], y[1] + h * k[1]}; }

Vec2 hermite(double t0, double t1, const Vec2& y0, const Vec2& y1, const Vec2& f0,
             const Vec2& f1, double t) {
    const double h = t1 - t0;
    if (h == 0.0) return y0;
    const double s = (t - t0) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    Vec2 out;
    for (int i = 0; i < 2; ++i) {
        out[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
    }
    return out;
}

Vec2 dense_at(const Step& s, double t) { return hermite(s.t0, s.t1, s.y0, s.y1, s.f0, s.f1, t); }

bool finite(const Vec2& v) { return std::isfinite(v[0]) && std::isfinite(v[1]); }

// Dormand-Prince 5(4) tableau.
namespace dp {
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
}  // namespace dp

/// Advances y' = field(y) from t = 0 to t_end and hands every accepted step
/// to `visit`, which returns false to stop early. The last step is clipped so
/// the trajectory ends exactly at t_end.
template <class Field, class Visit>
void drive(Field&& field, const Vec2& y_start, double t_end, const IntegratorConfig& cfg,
           Visit&& visit) {
    double t = 0.0;
    Vec2 y = y_start;
    Vec2 f = field(y);
    double h = std::min(cfg.step, t_end);
    std::int64_t attempts = 0;

    while (t < t_end) {
        if (attempts++ >= cfg.max_steps) {
            throw Error(ErrorCode::MaxStepsExceeded,
                        "reached " + std::to_string(cfg.max_steps) + " steps at t = " +
                            std::to_string(t));
        }
        const bool last = t + h >= t_end;
        const double h_try = last ? t_end - t : h;
        const double t_next = last ? t_end : t + h_try;

        if (cfg.method == Method::RK4Fixed) {
            const Vec2 k1 = f;
            const Vec2 k2 = field(axpy(y, 0.5 * h_try, k1));
            const Vec2 k3 = field(axpy(y, 0.5 * h_try, k2));
            const Vec2 k4 = field(axpy(y, h_try, k3));
            Vec2 y_next;
            for (int i = 0; i < 2; ++i) {
                y_next[i] = y[i] + h_try / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            if (!finite(y_next)) {
                throw Error(ErrorCode::StepFailure, "non-finite state at t = " + std::to_string(t));
            }
            const Vec2 f_next = field(y_next);
            const Step step{t, t_next, y, y_next, f, f_next};
            t = t_next;
            y = y_next;
            f = f_next;
            if (!visit(step)) return;
            continue;
        }

        using namespace dp;
        const Vec2& k1 = f;
        const Vec2 k2 = field({y[0] + h_try * a21 * k1[0], y[1] + h_try * a21 * k1[1]});
        Vec2 tmp;
        for (int i = 0; i < 2; ++i) tmp[i] = y[i] + h_try * (a31 * k1[i] + a32 * k2[i]);
        const Vec2 k3 = field(tmp);
        for (int i = 0; i < 2; ++i) tmp[i] = y[i] + h_try * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        const Vec2 k4 = field(tmp);
        for (int i = 0; i < 2; ++i) {
            tmp[i] = y[i] + h_try * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        }
        const Vec2 k5 = field(tmp);
        for (int i = 0; i < 2; ++i) {
            tmp[i] = y[i] +
                     h_try * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        }
        const Vec2 k6 = field(tmp);
        Vec2 y_next;
        for (int i = 0; i < 2; ++i) {
            y_next[i] = y[i] + h_try * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        }
        const Vec2 k7 = finite(y_next) ? field(y_next) : Vec2{NAN, NAN};

        double err = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double e = h_try * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                      e6 * k6[i] + e7 * k7[i]);
            const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y_next[i]));
            err += (e / scale) * (e / scale);
        }
        err = std::sqrt(0.5 * err);

        if (!std::isfinite(err) || err > 1.0) {
            const double factor = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
            h = h_try * factor;
            if (h < kMinStep) {
                throw Error(ErrorCode::StepFailure,
                            "adaptive step underflow at t = " + std::to_string(t));
            }
            continue;
        }

        const Step step{t, t_next, y, y_next, f, k7};
        const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        if (!last) h = h_try * factor;
        t = t_next;
        y = y_next;
        f = k7;
        if (!visit(step)) return;
    }
}

/// Bisection for the instant where `same_side` flips inside a step. Stops when
/// the residual drops below tol or the bracket collapses to rounding.
template <class SameSide, class Residual>
double locate(const Step& s, SameSide&& same_side, Residual&& residual, double tol) {
    double lo = s.t0;
    double hi = s.t1;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (std::abs(residual(mid)) <= tol) return mid;
        if (same_side(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(hi))) {
            break;
        }
    }
    return hi;
}

bool section_crossed(double ya, double yb) { return (ya < 0.0 && yb >= 0.0) || (ya > 0.0 && yb <= 0.0); }

Vec2 chart_field(Chart chart, const Vec2& y, const Params& p) {
    return chart == Chart::Original ? duffing_field(State::from(y), p)
                                    : covered_field({y[0], y[1], Sheet::Upper}, p);
}

// Events inside one accepted step, for either chart, unsorted.
std::vector<Event> step_events(Chart chart, const Step& s, Sheet sheet_before) {
    std::vector<Event> found;
    if (chart == Chart::Original) {
        const auto upper = [&](double t) { return sheet_of(State::from(dense_at(s, t))) == Sheet::Upper; };
        const bool upper_a = sheet_of(State::from(s.y0)) == Sheet::Upper;
        const bool upper_b = sheet_of(State::from(s.y1)) == Sheet::Upper;
        if (upper_a != upper_b) {
            const double tr = locate(
                s, [&](double t) { return upper(t) == upper_a; },
                [&](double t) {
                    const Vec2 v = dense_at(s, t);
                    return 2.0 * v[0] * v[1];
                },
                kEventTolerance);
            const State at = State::from(dense_at(s, tr));
            if (at.x * at.x + at.y * at.y <= kBranchPointTolerance) {
                throw Error(ErrorCode::DegenerateCrossing,
                            "trajectory crosses the y axis through the origin at t = " +
                                std::to_string(tr));
            }
            found.push_back({tr, EventKind::CutCrossing, at, toggle_sheet(sheet_before),
                             at.y > 0.0 ? 1 : -1});
        }
        const double ya = s.y0[1];
        if (section_crossed(ya, s.y1[1])) {
            const double tr = locate(
                s, [&](double t) { return dense_at(s, t)[1] * ya > 0.0; },
                [&](double t) { return dense_at(s, t)[1]; }, kEventTolerance);
            found.push_back({tr, EventKind::SectionReturn, State::from(dense_at(s, tr)),
                             Sheet::Upper, ya < 0.0 ? 1 : -1});
        }
        return found;
    }

    const bool side_a = cut_side_positive(s.y0[1]);
    if (side_a == cut_side_positive(s.y1[1])) return found;
    const bool is_cut = crosses_cut(s.y0, s.y1, kBranchPointTolerance).has_value();
    const double tr = locate(
        s, [&](double t) { return cut_side_positive(dense_at(s, t)[1]) == side_a; },
        [&](double t) { return dense_at(s, t)[1]; }, kEventTolerance);
    const Vec2 at = dense_at(s, tr);
    const Sheet after = is_cut ? toggle_sheet(sheet_before) : sheet_before;
    const State orig = inverse_cover({at[0], at[1], after});
    const int sheet_sign = after == Sheet::Upper ? 1 : -1;
    const int y1_after = side_a ? -1 : 1;
    if (is_cut) {
        found.push_back({tr, EventKind::CutCrossing, orig, after, orig.y >= 0.0 ? 1 : -1});
    } else {
        found.push_back({tr, EventKind::SectionReturn, orig, after, y1_after * sheet_sign});
    }
    return found;
}

Trajectory run(Chart chart, const Vec2& y0, Sheet sheet0, const Params& p,
               const IntegratorConfig& cfg) {
    validate(cfg);
    Trajectory traj;
    traj.chart = chart;
    traj.params = p;

    Sheet sheet = sheet0;
    const auto record = [&](double t, const Vec2& y, const Vec2& f) {
        if (chart == Chart::Original) {
            const State s = State::from(y);
            const CoveredState c = cover_map(s);
            traj.samples.push_back({t, s});
            traj.covered_samples.push_back({t, {c.x1, c.y1, sheet}});
        } else {
            if (covered_radius(y[0], y[1]) < kBranchPointTolerance) {
                throw Error(ErrorCode::BranchPointApproach,
                            "covered trajectory reached the branch point at t = " + std::to_string(t));
            }
            const CoveredState c{y[0], y[1], sheet};
            traj.samples.push_back({t, inverse_cover(c)});
            traj.covered_samples.push_back({t, c});
        }
        traj.dense.push_back({t, y, f});
    };

    const auto field = [&](const Vec2& y) { return chart_field(chart, y, p); };
    record(0.0, y0, field(y0));
    drive(field, y0, cfg.t_max, cfg, [&](const Step& s) {
        auto events = step_events(chart, s, sheet);
        // Cut crossings first, then section returns; processing in time order.
        std::stable_sort(events.begin(), events.end(),
                         [](const Event& a, const Event& b) { return a.t < b.t; });
        for (auto& e : events) {
            if (e.kind == EventKind::CutCrossing) {
                sheet = toggle_sheet(sheet);
                e.sheet_after = sheet;
            } else {
                e.sheet_after = sheet;
            }
            traj.events.push_back(e);
        }
        record(s.t1, s.y1, s.f1);
        return true;
    });
    return traj;
}

}  // namespace

void validate(const IntegratorConfig& cfg) {
    const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(cfg.step)) throw Error(ErrorCode::InvalidArgument, "step must be > 0");
    if (!positive(cfg.rel_tol) || !positive(cfg.abs_tol)) {
        throw Error(ErrorCode::InvalidArgument, "tolerances must be > 0");
    }
    if (!positive(cfg.t_max)) throw Error(ErrorCode::InvalidArgument, "t_max must be > 0");
    if (cfg.max_steps <= 0) throw Error(ErrorCode::InvalidArgument, "max_steps must be > 0");
}

std::size_t Trajectory::segment_of(double t) const {
    if (samples.empty() || !(t >= t_begin()) || !(t <= t_end())) {
        throw Error(ErrorCode::InvalidArgument, "time " + std::to_string(t) + " outside trajectory");
    }
    if (samples.size() == 1) return 0;
    const auto it = std::upper_bound(dense.begin(), dense.end(), t,
                                     [](double v, const DenseNode& n) { return v < n.t; });
    const auto idx = static_cast<std::size_t>(std::distance(dense.begin(), it));
    return std::min(idx == 0 ? 0 : idx - 1, dense.size() - 2);
}

State Trajectory::state_at(double t) const {
    const std::size_t i = segment_of(t);
    if (samples.size() == 1 || t == dense[i].t) return samples[i].state;
    if (t == dense[i + 1].t) return samples[i + 1].state;
    const Vec2 y = hermite(dense[i].t, dense[i + 1].t, dense[i].y, dense[i + 1].y, dense[i].f,
                           dense[i + 1].f, t);
    if (chart == Chart::Original) return State::from(y);
    return inverse_cover(covered_at(t));
}

CoveredState Trajectory::covered_at(double t) const {
    const std::size_t i = segment_of(t);
    if (samples.size() == 1 || t == dense[i].t) return covered_samples[i].state;
    if (t == dense[i + 1].t) return covered_samples[i + 1].state;
    const Vec2 y = hermite(dense[i].t, dense[i + 1].t, dense[i].y, dense[i + 1].y, dense[i].f,
                           dense[i + 1].f, t);
    if (chart == Chart::Original) return cover_map(State::from(y));
    // At most one cut crossing per step: the sheet flips once y1 has left the
    // side it started the step on.
    const CoveredState& a = covered_samples[i].state;
    Sheet sheet = a.sheet;
    if (covered_samples[i + 1].state.sheet != a.sheet &&
        cut_side_positive(y[1]) != cut_side_positive(a.y1)) {
        sheet = toggle_sheet(sheet);
    }
    return {y[0], y[1], sheet};
}

std::size_t Trajectory::cut_crossings() const noexcept {
    return static_cast<std::size_t>(std::count_if(events.begin(), events.end(), [](const Event& e) {
        return e.kind == EventKind::CutCrossing;
    }));
}

Trajectory integrate_original(const State& s0, const Params& p, const IntegratorConfig& cfg) {
    require_valid(s0, p);
    return run(Chart::Original, s0.vec(), sheet_of(s0), p, cfg);
}

Trajectory integrate_covered(const CoveredState& c0, const Params& p, const IntegratorConfig& cfg) {
    require_valid(State{c0.x1, c0.y1}, p);
    return run(Chart::Covered, c0.vec(), c0.sheet, p, cfg);
}

PeriodInfo find_period_info(const State& s0, const Params& p, const IntegratorConfig& cfg) {
    require_valid(s0, p);
    validate(cfg);
    if (p.mu != 0.0) {
        throw Error(ErrorCode::InvalidArgument, "periods exist only for the conservative flow (mu = 0)");
    }
    const Vec2 f0 = duffing_field(s0, p);
    if (f0[0] == 0.0 && f0[1] == 0.0) {
        throw Error(ErrorCode::InvalidArgument, "initial state is a fixed point");
    }
    if (std::abs(hamiltonian(s0, p) - p.c) < kSeparatrixTolerance) {
        throw Error(ErrorCode::OnSeparatrix, "orbit lies on the homoclinic level H = 0");
    }

    Vec2 y0 = s0.vec();
    PeriodInfo info;
    int direction = 0;
    bool started = false;
    if (std::abs(y0[1]) <= 1e-10) {
        y0[1] = 0.0;
        direction = f0[1] > 0.0 ? 1 : -1;
        started = true;
    }

    bool done = false;
    const auto field = [&](const Vec2& y) { return duffing_field(State::from(y), p); };
    drive(field, y0, cfg.t_max, cfg, [&](const Step& s) {
        const double ya = s.y0[1];
        if (!section_crossed(ya, s.y1[1])) return true;
        const int dir = ya < 0.0 ? 1 : -1;
        const double tr = locate(
            s, [&](double t) { return dense_at(s, t)[1] * ya > 0.0; },
            [&](double t) { return dense_at(s, t)[1]; }, kEventTolerance);
        if (!started) {
            started = true;
            direction = dir;
            info.first_crossing = tr;
            return true;
        }
        if (dir != direction) return true;
        info.period = tr - info.first_crossing;
        done = true;
        return false;
    });
    if (!done) {
        throw Error(ErrorCode::NoReturn, "no return to the section before t_max = " +
                                             std::to_string(cfg.t_max));
    }
    return info;
}

double find_period(const State& s0, const Params& p, const IntegratorConfig& cfg) {
    return find_period_info(s0, p, cfg).period;
}

}  // namespace duffing
