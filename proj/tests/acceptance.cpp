// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "duffing/actionangle.hpp"
#include "duffing/covering.hpp"
#include "duffing/dynamics.hpp"
#include "duffing/error.hpp"
#include "duffing/integrate.hpp"
#include "duffing/verify.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sys/wait.h>
#include <unistd.h>
#include <sstream>
#include <string>
#include <vector>

using namespace duffing;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

IntegratorConfig config(double t_max) {
    IntegratorConfig cfg;
    cfg.t_max = t_max;
    return cfg;
}

Outcome pushforward() {
    Outcome out{true, ""};
    for (const double mu : {0.0, 0.1, 0.5}) {
        const auto r = verify::check_pushforward(10'000, mu, 42, 1e-10);
        out.passed = out.passed && r.passed && r.n_samples == 10'000;
        out.detail += fmt("mu=%g max_abs=%.3g  ", mu, r.max_abs_error);
    }
    return out;
}

Outcome angular_velocity() {
    const auto r = verify::check_theta_dot(10'000, 42, 1e-10);
    const double a = theta_dot_of({0, 1});
    const double b = theta_dot_of({2, 0});
    const bool pins = std::abs(a + 1.0) <= 1e-12 && std::abs(b + 8.0) <= 1e-12;
    return {r.passed && pins, fmt("n=%lld max_rel=%.3g theta_dot(0,1)=%.17g theta_dot(2,0)=%.17g",
                                  static_cast<long long>(r.n_samples), r.max_rel_error, a, b)};
}

Outcome sign_claims() {
    verify::Sampler rng(42);
    int negative = 0;
    int drawn = 0;
    double worst = -1e300;
    while (drawn < 10'000) {
        const State s = rng.state_in(-verify::kSampleBox, verify::kSampleBox);
        const bool excluded = std::hypot(s.x - 1, s.y) < kSingularRadius || std::hypot(s.x + 1, s.y) < kSingularRadius ||
                              (s.x == 0 && s.y == 0);
        if (excluded) continue;
        ++drawn;
        const double td = theta_dot_of(s);
        worst = std::max(worst, td);
        if (td < 0) ++negative;
    }
    const double origin = theta_dot_of({0, 0});
    return {negative == drawn && origin == 0.0,
            fmt("%d/%d negative, largest %.3g, theta_dot(0,0)=%g", negative, drawn, worst, origin)};
}

Outcome conservation() {
    const auto r = verify::check_conservation({-0.2, 0.005, 0.5}, 100.0, 1e-8);
    return {r.passed, fmt("max |H drift| = %.3g", r.max_abs_error)};
}

Outcome winding() {
    Outcome out{true, ""};
    for (const double h : {-0.2, 0.5}) {
        const State s0 = state_on_level(h);
        const PeriodInfo info = find_period_info(s0, {}, config(100));
        // measure from the section crossing that opens the period
        const State start =
            info.first_crossing > 0 ? integrate_original(s0, {}, config(info.first_crossing)).samples.back().state : s0;
        const auto angles = unwrap_theta(integrate_original(start, {}, config(info.period)));
        const double total = angles.back().theta_unwrapped - angles.front().theta_unwrapped;
        const double expected = h < 0 ? -2 * kPi : -4 * kPi;
        out.passed = out.passed && std::abs(total - expected) <= 1e-6;
        out.detail += fmt("H=%g winding=%.12f (err %.3g)  ", h, total, std::abs(total - expected));
    }
    return out;
}

Outcome cut_transit() {
    // H = 0.5 turning point on the x-axis, so no crossing lands on an endpoint
    const State s0{std::sqrt(1.0 + std::sqrt(3.0)), 0.0};
    const double period = find_period(s0, {}, config(100));
    const auto orig = integrate_original(s0, {}, config(3 * period));
    const auto cov = integrate_covered(cover_map(s0), {}, config(3 * period));
    double worst = 0.0;
    for (const auto& ts : cov.samples) {
        const State o = orig.state_at(ts.t);
        worst = std::max({worst, std::abs(o.x - ts.state.x), std::abs(o.y - ts.state.y)});
    }
    const std::size_t crossings = cov.cut_crossings();
    return {worst <= 1e-6 && crossings == 6,
            fmt("max deviation %.3g, %zu cut crossings over 3 periods", worst, crossings)};
}

Outcome small_oscillation() {
    const State well{1.001, 0};
    const double t = find_period(well, {}, config(100));
    const double t_ref = 2 * kPi / std::sqrt(2.0);
    const double excess = hamiltonian(well, {}) + 0.25;
    const double action = action_original(well, {}, config(100));
    const double action_ref = excess / std::sqrt(2.0);

    const State s0{1.2, 0};
    const double h = hamiltonian(s0, {});
    const double dh = 1e-4;
    const double slope =
        (action_original(state_on_level(h + dh), {}, config(100)) - action_original(s0, {}, config(100))) / dh;
    const double tp = find_period(s0, {}, config(100));
    const double slope_rel = std::abs(slope - tp / (2 * kPi)) / (tp / (2 * kPi));

    const bool ok = std::abs(t - t_ref) <= 1e-2 && std::abs(action - action_ref) <= 0.05 * action_ref && slope_rel <= 1e-2;
    return {ok, fmt("T=%.12f (ref %.12f), I=%.6g (ref %.6g), dI/dH rel err %.3g", t, t_ref, action, action_ref,
                    slope_rel)};
}

Outcome dissipative() {
    const Params p{0.1, 0.0};
    const auto traj = integrate_original({0, 1.5}, p, config(50));
    const auto theta = unwrap_theta(traj);
    std::vector<double> h(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) h[i] = hamiltonian(traj.samples[i].state, p);

    std::size_t theta_bad = 0;
    std::size_t h_bad = 0;
    for (std::size_t i = 1; i < traj.size(); ++i) {
        if (!(theta[i].theta_unwrapped < theta[i - 1].theta_unwrapped)) ++theta_bad;
        if (h[i] > h[i - 1]) ++h_bad;
    }
    std::size_t pair_bad = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        for (std::size_t j = i + 1; j < traj.size(); ++j) {
            if ((h[j] - h[i]) * (theta[j].theta_unwrapped - theta[i].theta_unwrapped) < 0) ++pair_bad;
        }
    }
    return {theta_bad == 0 && h_bad == 0 && pair_bad == 0,
            fmt("%zu samples; violations: theta %zu, H %zu, pairs %zu", traj.size(), theta_bad, h_bad, pair_bad)};
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

int shell(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

Outcome reproducibility() {
    const fs::path base = fs::temp_directory_path() / ("duffing-acceptance-" + std::to_string(::getpid()));
    const fs::path a = base / "a";
    const fs::path b = base / "b";
    fs::create_directories(a);
    fs::create_directories(b);
    const std::string cli = DUFFING_CLI_PATH;
    bool ok = true;
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(DUFFING_SCENARIO_DIR)) {
        if (entry.path().extension() != ".json") continue;
        const std::string cfg = entry.path().string();
        ok = ok && shell("\"" + cli + "\" run \"" + cfg + "\" --output-dir \"" + a.string() + "\"") == 0;
        ok = ok && shell("\"" + cli + "\" run \"" + cfg + "\" --output-dir \"" + b.string() + "\"") == 0;
    }
    for (const auto& entry : fs::directory_iterator(a)) {
        if (entry.path().extension() != ".csv") continue;
        ++compared;
        ok = ok && slurp(entry.path()) == slurp(b / entry.path().filename());
    }
    const int verify_rc = shell("\"" + cli + "\" verify > /dev/null");
    fs::remove_all(base);
    return {ok && compared > 0 && verify_rc == 0,
            fmt("%zu CSVs byte-identical across runs: %s; verify exit %d", compared, ok ? "yes" : "no", verify_rc)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"pushforward identity", pushforward},
        {"angular-velocity identity", angular_velocity},
        {"sign claims", sign_claims},
        {"conservation", conservation},
        {"winding dichotomy", winding},
        {"smooth cut transit", cut_transit},
        {"small-oscillation limits", small_oscillation},
        {"dissipative monotonicity", dissipative},
        {"reproducibility", reproducibility},
    };
    int failures = 0;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        if (!o.passed) ++failures;
        std::printf("[%s] %d. %s: %s\n", o.passed ? "PASS" : "FAIL", index, name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", index - failures, index);
    return failures == 0 ? 0 : 1;
}
