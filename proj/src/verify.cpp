#include "duffing/verify.hpp"

#include "duffing/actionangle.hpp"
#include "duffing/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace duffing::verify {
namespace {

constexpr double kPi = std::numbers::pi;

class ErrorTally {
public:
    void add(double got, double want) {
        const double abs_err = std::abs(got - want);
        max_abs_ = std::max(max_abs_, abs_err);
        if (want != 0.0) max_rel_ = std::max(max_rel_, abs_err / std::abs(want));
        ++n_;
    }
    void add_abs(double abs_err) {
        max_abs_ = std::max(max_abs_, abs_err);
        ++n_;
    }

    CheckReport report(std::string name, double tolerance, bool relative) const {
        CheckReport r;
        r.name = std::move(name);
        r.n_samples = n_;
        r.max_abs_error = max_abs_;
        r.max_rel_error = max_rel_;
        r.tolerance = tolerance;
        r.passed = (relative ? max_rel_ : max_abs_) <= tolerance;
        return r;
    }

private:
    std::int64_t n_ = 0;
    double max_abs_ = 0.0;
    double max_rel_ = 0.0;
};

void require_positive(std::int64_t n) {
    if (n <= 0) throw Error(ErrorCode::InvalidArgument, "sample count must be positive");
}

std::string with_mu(const char* name, double mu) {
    std::ostringstream os;
    os << name << "(mu=" << mu << ")";
    return os.str();
}

// Pushforward of the original field through the Jacobian of (x^2 - y^2, 2xy).
Vec2 jacobian_pushforward(const State& s, const Params& p) {
    const Vec2 f = duffing_field(s, p);
    return {2.0 * s.x * f[0] - 2.0 * s.y * f[1], 2.0 * s.y * f[0] + 2.0 * s.x * f[1]};
}

double chain_rule_theta_dot(const State& s) {
    const CoveredState c = cover_map(s);
    const Vec2 v = covered_field(c, Params{});
    const double dx = c.x1 - 1.0;
    return (v[1] * dx - c.y1 * v[0]) / (dx * dx + c.y1 * c.y1);
}

void require_off_separatrix(double h) {
    if (std::abs(h) < kSeparatrixTolerance) {
        throw Error(ErrorCode::OnSeparatrix, "energy level on the separatrix has no periodic orbit");
    }
}

IntegratorConfig default_config(double t_max) {
    IntegratorConfig cfg;
    cfg.t_max = t_max;
    return cfg;
}

}  // namespace

CheckReport check_pushforward(std::int64_t n, double mu, std::uint64_t seed, double tolerance) {
    require_positive(n);
    const Params p{mu, 0.0};
    Sampler rng(seed);
    ErrorTally tally;
    for (std::int64_t i = 0; i < n; ++i) {
        const State s = rng.state_in(-kSampleBox, kSampleBox);
        const Vec2 got = covered_field(cover_map(s), p);
        const Vec2 want = jacobian_pushforward(s, p);
        tally.add(got[0], want[0]);
        tally.add(got[1], want[1]);
    }
    auto r = tally.report(with_mu("check_pushforward", mu), tolerance, false);
    r.n_samples = n;
    return r;
}

CheckReport check_theta_dot(std::int64_t n, std::uint64_t seed, double tolerance) {
    require_positive(n);
    Sampler rng(seed);
    ErrorTally tally;
    tally.add(theta_dot_of({0.0, 1.0}), -1.0);
    tally.add(theta_dot_of({2.0, 0.0}), -8.0);
    for (std::int64_t i = 0; i < n; ++i) {
        const State s = rng.state_in(-kSampleBox, kSampleBox);
        if (std::hypot(s.x - 1.0, s.y) < kThetaDotExclusion ||
            std::hypot(s.x + 1.0, s.y) < kThetaDotExclusion) {
            continue;
        }
        tally.add(theta_dot_of(s), chain_rule_theta_dot(s));
    }
    return tally.report("check_theta_dot", tolerance, true);
}

CheckReport check_conservation(const std::vector<double>& h_levels, double t_max, double tolerance) {
    ErrorTally tally;
    const Params p{};
    for (const double h : h_levels) {
        require_off_separatrix(h);
        const State s0 = state_on_level(h, p);
        const Trajectory traj = integrate_original(s0, p, default_config(t_max));
        const double h0 = hamiltonian(s0, p);
        for (const auto& ts : traj.samples) tally.add_abs(std::abs(hamiltonian(ts.state, p) - h0));
    }
    return tally.report("check_conservation", tolerance, false);
}

CheckReport check_winding(const std::vector<double>& h_levels, double tolerance) {
    ErrorTally tally;
    const Params p{};
    for (const double h : h_levels) {
        require_off_separatrix(h);
        const State s0 = state_on_level(h, p);
        IntegratorConfig cfg = default_config(1000.0);
        cfg.t_max = find_period(s0, p, cfg);
        const auto angles = unwrap_theta(integrate_original(s0, p, cfg));
        const double winding = angles.back().theta_unwrapped - angles.front().theta_unwrapped;
        tally.add(winding, h < 0.0 ? -2.0 * kPi : -4.0 * kPi);
    }
    return tally.report("check_winding", tolerance, false);
}

CheckReport check_round_trip(std::int64_t n, std::uint64_t seed, double tolerance) {
    require_positive(n);
    Sampler rng(seed);
    ErrorTally tally;
    for (std::int64_t i = 0; i < n; ++i) {
        const State s = rng.state_in(-kSampleBox, kSampleBox);
        const State back = inverse_cover(cover_map(s));
        tally.add(back.x, s.x);
        tally.add(back.y, s.y);
    }
    auto r = tally.report("check_round_trip", tolerance, false);
    r.n_samples = n;
    return r;
}

CheckReport check_energy_rate(std::int64_t n, double mu, std::uint64_t seed, double tolerance) {
    require_positive(n);
    const Params p{mu, 0.0};
    Sampler rng(seed);
    ErrorTally tally;
    for (std::int64_t i = 0; i < n; ++i) {
        const State s = rng.state_in(-kSampleBox, kSampleBox);
        const Vec2 f = duffing_field(s, p);
        const double grad_product = (s.x * s.x * s.x - s.x) * f[0] + s.y * f[1];
        tally.add(energy_rate(s, p), grad_product);
        if (std::hypot(s.x - 1.0, s.y) < kThetaDotExclusion ||
            std::hypot(s.x + 1.0, s.y) < kThetaDotExclusion || std::hypot(s.x, s.y) < kThetaDotExclusion) {
            continue;
        }
        tally.add(dH_dtheta(s, p), grad_product / chain_rule_theta_dot(s));
    }
    auto r = tally.report(with_mu("check_energy_rate", mu), tolerance, false);
    r.n_samples = n;
    return r;
}

const std::vector<std::string>& exposed_formulas() {
    static const std::vector<std::string> formulas{
        "duffing_field", "hamiltonian",  "energy_rate", "cover_map", "inverse_cover",
        "covered_field", "theta_of",     "theta_dot_of", "dH_dtheta"};
    return formulas;
}

const std::vector<CheckEntry>& default_checks() {
    constexpr std::int64_t n = 10'000;
    const auto tol = [](const CheckOptions& o, double fallback) { return o.tolerance.value_or(fallback); };
    static const std::vector<CheckEntry> checks = [&] {
        std::vector<CheckEntry> v;
        for (const double mu : {0.0, 0.1, 0.5}) {
            v.push_back({"check_pushforward",
                         {"duffing_field", "cover_map", "covered_field"},
                         [=](const CheckOptions& o) {
                             return check_pushforward(n, mu, o.seed, tol(o, kPushforwardTolerance));
                         }});
        }
        v.push_back({"check_theta_dot",
                     {"theta_dot_of", "covered_field", "cover_map"},
                     [=](const CheckOptions& o) { return check_theta_dot(n, o.seed, tol(o, kThetaDotTolerance)); }});
        v.push_back({"check_round_trip",
                     {"cover_map", "inverse_cover"},
                     [=](const CheckOptions& o) { return check_round_trip(n, o.seed, tol(o, kRoundTripTolerance)); }});
        v.push_back({"check_energy_rate",
                     {"energy_rate", "dH_dtheta", "duffing_field"},
                     [=](const CheckOptions& o) {
                         return check_energy_rate(n, 0.5, o.seed, tol(o, kEnergyRateTolerance));
                     }});
        v.push_back({"check_conservation",
                     {"hamiltonian", "duffing_field"},
                     [=](const CheckOptions& o) {
                         return check_conservation({-0.2, 0.005, 0.5}, 100.0, tol(o, kConservationTolerance));
                     }});
        v.push_back({"check_winding",
                     {"theta_of", "cover_map"},
                     [=](const CheckOptions& o) { return check_winding({-0.2, 0.5}, tol(o, kWindingTolerance)); }});
        return v;
    }();
    return checks;
}

std::vector<CheckReport> run_checks(const CheckOptions& opts, const std::string& only) {
    std::vector<CheckReport> out;
    for (const auto& entry : default_checks()) {
        if (!only.empty() && entry.name != only) continue;
        out.push_back(entry.run(opts));
    }
    return out;
}

std::string to_json_line(const CheckReport& report) {
    const nlohmann::ordered_json j{{"name", report.name},
                                   {"n_samples", report.n_samples},
                                   {"max_abs_error", report.max_abs_error},
                                   {"max_rel_error", report.max_rel_error},
                                   {"passed", report.passed},
                                   {"tolerance", report.tolerance}};
    return j.dump();
}

}  // namespace duffing::verify
