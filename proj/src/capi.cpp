#include "duffing/duffing.h"

#include "duffing/actionangle.hpp"
#include "duffing/error.hpp"
#include "duffing/verify.hpp"

#include <algorithm>
#include <cstring>
#include <exception>
#include <new>
#include <string>

struct duffing_trajectory {
    duffing::Trajectory traj;
};

namespace {

thread_local std::string g_last_error;

duffing_status to_status(duffing::ErrorCode code) {
    using duffing::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidArgument: return DUFFING_ERR_INVALID_ARGUMENT;
        case ErrorCode::StepFailure: return DUFFING_ERR_STEP_FAILURE;
        case ErrorCode::MaxStepsExceeded: return DUFFING_ERR_MAX_STEPS;
        case ErrorCode::BranchPointApproach: return DUFFING_ERR_BRANCH_POINT;
        case ErrorCode::DegenerateCrossing: return DUFFING_ERR_DEGENERATE_CROSSING;
        case ErrorCode::NoReturn: return DUFFING_ERR_NO_RETURN;
        case ErrorCode::OnSeparatrix: return DUFFING_ERR_ON_SEPARATRIX;
        case ErrorCode::CenterSingular: return DUFFING_ERR_CENTER_SINGULAR;
        case ErrorCode::OriginSingular: return DUFFING_ERR_ORIGIN_SINGULAR;
        case ErrorCode::UnwrapAmbiguous: return DUFFING_ERR_UNWRAP_AMBIGUOUS;
    }
    return DUFFING_ERR_INTERNAL;
}

template <class Fn>
duffing_status guarded(Fn&& fn) noexcept {
    try {
        g_last_error.clear();
        fn();
        return DUFFING_OK;
    } catch (const duffing::Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return DUFFING_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return DUFFING_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown exception";
        return DUFFING_ERR_INTERNAL;
    }
}

template <class... Ptrs>
void require_non_null(const Ptrs*... ptrs) {
    if (((ptrs == nullptr) || ...)) {
        throw duffing::Error(duffing::ErrorCode::InvalidArgument, "null pointer argument");
    }
}

duffing::Params params_of(const duffing_params* p) {
    require_non_null(p);
    return {p->mu, p->c};
}

duffing::IntegratorConfig config_of(const duffing_integrator_config* c) {
    require_non_null(c);
    if (c->method != DUFFING_RK4_FIXED && c->method != DUFFING_RK45_ADAPTIVE) {
        throw duffing::Error(duffing::ErrorCode::InvalidArgument, "unknown integrator method");
    }
    duffing::IntegratorConfig cfg;
    cfg.method = c->method == DUFFING_RK4_FIXED ? duffing::Method::RK4Fixed : duffing::Method::RK45Adaptive;
    cfg.step = c->step;
    cfg.rel_tol = c->rel_tol;
    cfg.abs_tol = c->abs_tol;
    cfg.t_max = c->t_max;
    cfg.max_steps = c->max_steps;
    duffing::validate(cfg);
    return cfg;
}

duffing::Sheet sheet_of(duffing_sheet s) {
    if (s != DUFFING_SHEET_UPPER && s != DUFFING_SHEET_LOWER) {
        throw duffing::Error(duffing::ErrorCode::InvalidArgument, "unknown sheet tag");
    }
    return s == DUFFING_SHEET_UPPER ? duffing::Sheet::Upper : duffing::Sheet::Lower;
}

duffing_sheet to_c(duffing::Sheet s) { return s == duffing::Sheet::Upper ? DUFFING_SHEET_UPPER : DUFFING_SHEET_LOWER; }

duffing::State checked_state(double x, double y) {
    const duffing::State s{x, y};
    if (!duffing::is_finite(s)) throw duffing::Error(duffing::ErrorCode::InvalidArgument, "state must be finite");
    return s;
}

char* copy_string(const std::string& s) {
    auto* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* duffing_version(void) { return "1.0.0"; }

const char* duffing_last_error(void) { return g_last_error.c_str(); }

const char* duffing_status_name(duffing_status status) {
    switch (status) {
        case DUFFING_OK: return "OK";
        case DUFFING_ERR_INVALID_ARGUMENT: return "InvalidArgument";
        case DUFFING_ERR_STEP_FAILURE: return "StepFailure";
        case DUFFING_ERR_MAX_STEPS: return "MaxStepsExceeded";
        case DUFFING_ERR_BRANCH_POINT: return "BranchPointApproach";
        case DUFFING_ERR_DEGENERATE_CROSSING: return "DegenerateCrossing";
        case DUFFING_ERR_NO_RETURN: return "NoReturn";
        case DUFFING_ERR_ON_SEPARATRIX: return "OnSeparatrix";
        case DUFFING_ERR_CENTER_SINGULAR: return "CenterSingular";
        case DUFFING_ERR_ORIGIN_SINGULAR: return "OriginSingular";
        case DUFFING_ERR_UNWRAP_AMBIGUOUS: return "UnwrapAmbiguous";
        case DUFFING_ERR_INTERNAL: return "Internal";
    }
    return "Unknown";
}

duffing_integrator_config duffing_default_config(void) {
    const duffing::IntegratorConfig d;
    return {DUFFING_RK45_ADAPTIVE, d.step, d.rel_tol, d.abs_tol, d.t_max, d.max_steps};
}

duffing_status duffing_field(double x, double y, const duffing_params* p, double out[2]) {
    return guarded([&] {
        require_non_null(out);
        const auto f = duffing::duffing_field(checked_state(x, y), params_of(p));
        out[0] = f[0];
        out[1] = f[1];
    });
}

duffing_status duffing_hamiltonian(double x, double y, const duffing_params* p, double* out) {
    return guarded([&] {
        require_non_null(out);
        *out = duffing::hamiltonian(checked_state(x, y), params_of(p));
    });
}

duffing_status duffing_energy_rate(double x, double y, const duffing_params* p, double* out) {
    return guarded([&] {
        require_non_null(out);
        *out = duffing::energy_rate(checked_state(x, y), params_of(p));
    });
}

duffing_status duffing_cover_map(double x, double y, double* x1, double* y1, duffing_sheet* sheet) {
    return guarded([&] {
        require_non_null(x1, y1, sheet);
        const auto c = duffing::cover_map(checked_state(x, y));
        *x1 = c.x1;
        *y1 = c.y1;
        *sheet = to_c(c.sheet);
    });
}

duffing_status duffing_inverse_cover(double x1, double y1, duffing_sheet sheet, double* x, double* y) {
    return guarded([&] {
        require_non_null(x, y);
        checked_state(x1, y1);
        const auto s = duffing::inverse_cover({x1, y1, sheet_of(sheet)});
        *x = s.x;
        *y = s.y;
    });
}

duffing_status duffing_covered_field(double x1, double y1, duffing_sheet sheet, const duffing_params* p,
                                     double out[2]) {
    return guarded([&] {
        require_non_null(out);
        checked_state(x1, y1);
        const auto f = duffing::covered_field({x1, y1, sheet_of(sheet)}, params_of(p));
        out[0] = f[0];
        out[1] = f[1];
    });
}

duffing_status duffing_theta(double x, double y, double* out) {
    return guarded([&] {
        require_non_null(out);
        *out = duffing::theta_of(checked_state(x, y));
    });
}

duffing_status duffing_theta_dot(double x, double y, double* out) {
    return guarded([&] {
        require_non_null(out);
        *out = duffing::theta_dot_of(checked_state(x, y));
    });
}

duffing_status duffing_dh_dtheta(double x, double y, const duffing_params* p, double* out) {
    return guarded([&] {
        require_non_null(out);
        *out = duffing::dH_dtheta(checked_state(x, y), params_of(p));
    });
}

duffing_status duffing_integrate_original(double x0, double y0, const duffing_params* p,
                                          const duffing_integrator_config* cfg, duffing_trajectory** out) {
    return guarded([&] {
        require_non_null(out);
        *out = nullptr;
        auto traj = duffing::integrate_original(checked_state(x0, y0), params_of(p), config_of(cfg));
        *out = new duffing_trajectory{std::move(traj)};
    });
}

duffing_status duffing_integrate_covered(double x1, double y1, duffing_sheet sheet, const duffing_params* p,
                                         const duffing_integrator_config* cfg, duffing_trajectory** out) {
    return guarded([&] {
        require_non_null(out);
        *out = nullptr;
        checked_state(x1, y1);
        auto traj = duffing::integrate_covered({x1, y1, sheet_of(sheet)}, params_of(p), config_of(cfg));
        *out = new duffing_trajectory{std::move(traj)};
    });
}

void duffing_trajectory_free(duffing_trajectory* traj) { delete traj; }

size_t duffing_trajectory_size(const duffing_trajectory* traj) { return traj ? traj->traj.size() : 0; }

duffing_status duffing_trajectory_sample(const duffing_trajectory* traj, size_t index, duffing_sample* out) {
    return guarded([&] {
        require_non_null(traj, out);
        if (index >= traj->traj.size()) {
            throw duffing::Error(duffing::ErrorCode::InvalidArgument, "sample index out of range");
        }
        const auto& s = traj->traj.samples[index];
        const auto& c = traj->traj.covered_samples[index];
        *out = {s.t, s.state.x, s.state.y, c.state.x1, c.state.y1, to_c(c.state.sheet)};
    });
}

size_t duffing_trajectory_event_count(const duffing_trajectory* traj) {
    return traj ? traj->traj.events.size() : 0;
}

duffing_status duffing_trajectory_event(const duffing_trajectory* traj, size_t index, duffing_event* out) {
    return guarded([&] {
        require_non_null(traj, out);
        if (index >= traj->traj.events.size()) {
            throw duffing::Error(duffing::ErrorCode::InvalidArgument, "event index out of range");
        }
        const auto& e = traj->traj.events[index];
        *out = {e.t,
                e.kind == duffing::EventKind::CutCrossing ? DUFFING_EVENT_CUT_CROSSING : DUFFING_EVENT_SECTION_RETURN,
                e.state.x,
                e.state.y,
                to_c(e.sheet_after),
                e.direction};
    });
}

duffing_status duffing_trajectory_energy_angle(const duffing_trajectory* traj, duffing_energy_angle* out,
                                               size_t capacity, size_t* count) {
    return guarded([&] {
        require_non_null(traj, count);
        if (capacity > 0) require_non_null(out);
        const auto curve = duffing::energy_angle_curve(traj->traj);
        *count = curve.size();
        for (size_t i = 0; i < curve.size() && i < capacity; ++i) {
            out[i] = {curve[i].theta_unwrapped, curve[i].h};
        }
    });
}

duffing_status duffing_find_period(double x0, double y0, const duffing_params* p,
                                   const duffing_integrator_config* cfg, double* period) {
    return guarded([&] {
        require_non_null(period);
        *period = duffing::find_period(checked_state(x0, y0), params_of(p), config_of(cfg));
    });
}

duffing_status duffing_action_covered(double x0, double y0, const duffing_params* p,
                                      const duffing_integrator_config* cfg, double* action) {
    return guarded([&] {
        require_non_null(action);
        *action = duffing::action_covered(checked_state(x0, y0), params_of(p), config_of(cfg));
    });
}

duffing_status duffing_action_original(double x0, double y0, const duffing_params* p,
                                       const duffing_integrator_config* cfg, double* action) {
    return guarded([&] {
        require_non_null(action);
        *action = duffing::action_original(checked_state(x0, y0), params_of(p), config_of(cfg));
    });
}

duffing_status duffing_verify(const char* only, uint64_t seed, double tolerance, char** json_lines,
                              int* all_passed) {
    return guarded([&] {
        require_non_null(json_lines, all_passed);
        *json_lines = nullptr;
        const std::string name = only ? only : "";
        if (!name.empty()) {
            const auto& checks = duffing::verify::default_checks();
            const bool known = std::any_of(checks.begin(), checks.end(),
                                           [&](const auto& c) { return c.name == name; });
            if (!known) throw duffing::Error(duffing::ErrorCode::InvalidArgument, "unknown check " + name);
        }
        duffing::verify::CheckOptions opts;
        opts.seed = seed;
        if (tolerance > 0.0) opts.tolerance = tolerance;
        std::string lines;
        bool ok = true;
        for (const auto& r : duffing::verify::run_checks(opts, name)) {
            lines += duffing::verify::to_json_line(r);
            lines += '\n';
            ok = ok && r.passed;
        }
        *all_passed = ok ? 1 : 0;
        *json_lines = copy_string(lines);
    });
}

duffing_status duffing_check_names(char** names) {
    return guarded([&] {
        require_non_null(names);
        std::string out;
        for (const auto& c : duffing::verify::default_checks()) {
            if (out.find(c.name + '\n') != std::string::npos) continue;
            out += c.name;
            out += '\n';
        }
        *names = copy_string(out);
    });
}

void duffing_string_free(char* s) { delete[] s; }

}  // extern "C"
