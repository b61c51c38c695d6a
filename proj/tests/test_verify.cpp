#include "duffing/error.hpp"
#include "duffing/verify.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <set>

using namespace duffing;
using namespace duffing::verify;

TEST_CASE("pushforward check passes for conservative and damped fields") {
    const auto r0 = check_pushforward(1000, 0.0, 42);
    CHECK(r0.passed);
    CHECK(r0.n_samples == 1000);
    CHECK(r0.tolerance == 1e-10);
    CHECK(check_pushforward(1000, 0.5, 7).passed);
    CHECK_THROWS_AS((void)check_pushforward(0, 0.0, 42), Error);
}

TEST_CASE("theta_dot check skips the exclusion disks") {
    const auto r = check_theta_dot(1000, 1);
    CHECK(r.passed);
    CHECK(r.n_samples <= 1002);
    CHECK(r.n_samples > 990);
    CHECK(r.max_rel_error <= 1e-10);
}

TEST_CASE("conservation check") {
    const auto r = check_conservation({-0.2, 0.005, 0.5}, 100.0);
    CHECK(r.passed);
    CHECK(r.max_abs_error <= 1e-8);
    CHECK_THROWS_AS((void)check_conservation({0.0}, 100.0), Error);
    const auto empty = check_conservation({}, 100.0);
    CHECK(empty.passed);
    CHECK(empty.n_samples == 0);
}

TEST_CASE("winding check") {
    CHECK(check_winding({-0.2}).passed);
    CHECK(check_winding({0.5}).passed);
    CHECK_THROWS_AS((void)check_winding({0.0}), Error);
}

TEST_CASE("round trip and energy rate checks") {
    CHECK(check_round_trip(1000, 3).passed);
    CHECK(check_energy_rate(1000, 0.5, 3).passed);
    CHECK(check_energy_rate(1000, 0.0, 3).passed);
}

TEST_CASE("an impossible tolerance fails the sampled checks") {
    CHECK_FALSE(check_pushforward(1000, 0.1, 42, 1e-16).passed);
    CHECK_FALSE(check_theta_dot(1000, 42, 1e-18).passed);
}

TEST_CASE("reports are deterministic for a given seed") {
    const auto a = check_pushforward(500, 0.1, 11);
    const auto b = check_pushforward(500, 0.1, 11);
    CHECK(to_json_line(a) == to_json_line(b));
    const auto c = check_theta_dot(500, 11);
    const auto d = check_theta_dot(500, 11);
    CHECK(to_json_line(c) == to_json_line(d));
}

TEST_CASE("JSON report carries exactly the report fields") {
    const auto line = to_json_line(check_round_trip(10, 1));
    const auto j = nlohmann::json::parse(line);
    std::set<std::string> keys;
    for (const auto& [k, _] : j.items()) keys.insert(k);
    CHECK(keys == std::set<std::string>{"name", "n_samples", "max_abs_error", "max_rel_error", "passed", "tolerance"});
    CHECK(j["name"] == "check_round_trip");
    CHECK(line.find('\n') == std::string::npos);
}

TEST_CASE("registry covers every exposed closed form") {
    std::set<std::string> covered;
    for (const auto& entry : default_checks()) covered.insert(entry.covers.begin(), entry.covers.end());
    for (const auto& f : exposed_formulas()) {
        CAPTURE(f);
        CHECK(covered.count(f) == 1);
    }
    // and only names that exist
    for (const auto& f : covered) {
        CHECK(std::find(exposed_formulas().begin(), exposed_formulas().end(), f) != exposed_formulas().end());
    }
}

TEST_CASE("run_checks filters by name") {
    const auto only = run_checks({}, "check_winding");
    REQUIRE(only.size() == 1);
    CHECK(only[0].name == "check_winding");
    CHECK(run_checks({}, "check_pushforward").size() == 3);
}
