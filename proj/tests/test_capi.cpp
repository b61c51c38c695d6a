// Exercises the exported C surface exactly as a foreign caller would.
#include "duffing/duffing.h"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

TEST_CASE("point evaluations through the C API") {
    const duffing_params p{0.1, 0.0};
    double f[2];
    REQUIRE(duffing_field(0, 1, &p, f) == DUFFING_OK);
    CHECK(f[0] == 1.0);
    CHECK(f[1] == -0.1);

    double h = 0;
    REQUIRE(duffing_hamiltonian(1, 0, &p, &h) == DUFFING_OK);
    CHECK(h == -0.25);

    double x1, y1;
    duffing_sheet sheet;
    REQUIRE(duffing_cover_map(-1, 0, &x1, &y1, &sheet) == DUFFING_OK);
    CHECK(x1 == 1.0);
    CHECK(sheet == DUFFING_SHEET_LOWER);

    double x, y;
    REQUIRE(duffing_inverse_cover(x1, y1, sheet, &x, &y) == DUFFING_OK);
    CHECK(x == -1.0);

    REQUIRE(duffing_covered_field(-1, 0, DUFFING_SHEET_UPPER, &p, f) == DUFFING_OK);
    CHECK(f[0] == doctest::Approx(0.2));

    double td = 0;
    REQUIRE(duffing_theta_dot(2, 0, &td) == DUFFING_OK);
    CHECK(td == -8.0);
    double dh = 0;
    REQUIRE(duffing_dh_dtheta(0, 1, &p, &dh) == DUFFING_OK);
    CHECK(dh == doctest::Approx(0.1));
}

TEST_CASE("errors map to status codes with a message") {
    double out = 0;
    CHECK(duffing_theta(1, 0, &out) == DUFFING_ERR_CENTER_SINGULAR);
    CHECK(std::string(duffing_last_error()).find("CenterSingular") != std::string::npos);
    const duffing_params p{0.1, 0.0};
    CHECK(duffing_dh_dtheta(0, 0, &p, &out) == DUFFING_ERR_ORIGIN_SINGULAR);
    CHECK(duffing_field(NAN, 0, &p, nullptr) == DUFFING_ERR_INVALID_ARGUMENT);
    CHECK(duffing_hamiltonian(0, 0, nullptr, &out) == DUFFING_ERR_INVALID_ARGUMENT);
    CHECK(duffing_theta(0, 1, &out) == DUFFING_OK);
    CHECK(std::string(duffing_last_error()).empty());
    CHECK(std::string(duffing_status_name(DUFFING_ERR_ON_SEPARATRIX)) == "OnSeparatrix");

    const duffing_params cons{0.0, 0.0};
    auto cfg = duffing_default_config();
    double period = 0;
    CHECK(duffing_find_period(std::sqrt(2.0), 0, &cons, &cfg, &period) == DUFFING_ERR_ON_SEPARATRIX);
    cfg.max_steps = 3;
    duffing_trajectory* traj = nullptr;
    CHECK(duffing_integrate_original(0, 1, &cons, &cfg, &traj) == DUFFING_ERR_MAX_STEPS);
    CHECK(traj == nullptr);
    cfg = duffing_default_config();
    cfg.method = static_cast<duffing_method>(7);
    CHECK(duffing_integrate_original(0, 1, &cons, &cfg, &traj) == DUFFING_ERR_INVALID_ARGUMENT);
    cfg = duffing_default_config();
    CHECK(duffing_integrate_covered(0, 0, DUFFING_SHEET_UPPER, &cons, &cfg, &traj) == DUFFING_ERR_BRANCH_POINT);
}

TEST_CASE("trajectory handles") {
    const duffing_params p{0.0, 0.0};
    auto cfg = duffing_default_config();
    cfg.t_max = 20.0;
    duffing_trajectory* traj = nullptr;
    REQUIRE(duffing_integrate_original(0, 2, &p, &cfg, &traj) == DUFFING_OK);
    REQUIRE(traj != nullptr);
    const size_t n = duffing_trajectory_size(traj);
    CHECK(n > 10);
    duffing_sample first{}, last{};
    REQUIRE(duffing_trajectory_sample(traj, 0, &first) == DUFFING_OK);
    REQUIRE(duffing_trajectory_sample(traj, n - 1, &last) == DUFFING_OK);
    CHECK(first.t == 0.0);
    CHECK(first.y == 2.0);
    CHECK(first.x1 == -4.0);
    CHECK(last.t == 20.0);
    CHECK(duffing_trajectory_sample(traj, n, &last) == DUFFING_ERR_INVALID_ARGUMENT);

    const size_t ne = duffing_trajectory_event_count(traj);
    CHECK(ne > 0);
    size_t cuts = 0;
    for (size_t i = 0; i < ne; ++i) {
        duffing_event e{};
        REQUIRE(duffing_trajectory_event(traj, i, &e) == DUFFING_OK);
        if (e.kind == DUFFING_EVENT_CUT_CROSSING) ++cuts;
    }
    CHECK(cuts > 0);

    size_t count = 0;
    REQUIRE(duffing_trajectory_energy_angle(traj, nullptr, 0, &count) == DUFFING_OK);
    CHECK(count == n);
    std::vector<duffing_energy_angle> ea(count);
    REQUIRE(duffing_trajectory_energy_angle(traj, ea.data(), ea.size(), &count) == DUFFING_OK);
    CHECK(ea.back().theta_unwrapped < ea.front().theta_unwrapped);
    duffing_trajectory_free(traj);
    duffing_trajectory_free(nullptr);
}

TEST_CASE("periods and actions through the C API") {
    const duffing_params p{0.0, 0.0};
    const auto cfg = duffing_default_config();
    double period = 0, ic = 0, io = 0;
    REQUIRE(duffing_find_period(1.2, 0, &p, &cfg, &period) == DUFFING_OK);
    REQUIRE(duffing_action_covered(1.2, 0, &p, &cfg, &ic) == DUFFING_OK);
    REQUIRE(duffing_action_original(1.2, 0, &p, &cfg, &io) == DUFFING_OK);
    CHECK(period > 4.4);
    CHECK(ic > io);
    CHECK(io > 0.0);
}

TEST_CASE("verify through the C API") {
    char* lines = nullptr;
    int ok = 0;
    REQUIRE(duffing_verify("check_round_trip", 42, 0.0, &lines, &ok) == DUFFING_OK);
    CHECK(ok == 1);
    CHECK(std::string(lines).find("\"name\":\"check_round_trip\"") != std::string::npos);
    duffing_string_free(lines);

    REQUIRE(duffing_verify("check_pushforward", 42, 1e-16, &lines, &ok) == DUFFING_OK);
    CHECK(ok == 0);
    duffing_string_free(lines);

    CHECK(duffing_verify("no_such_check", 42, 0.0, &lines, &ok) == DUFFING_ERR_INVALID_ARGUMENT);

    char* names = nullptr;
    REQUIRE(duffing_check_names(&names) == DUFFING_OK);
    CHECK(std::string(names).find("check_winding\n") != std::string::npos);
    duffing_string_free(names);
}
