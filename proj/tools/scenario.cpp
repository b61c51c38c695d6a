#include "scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace duffing::cli {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
    throw ConfigError("field '" + field + "': " + msg);
}

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) {
            fail(where.empty() ? key : where + "." + key, "unknown field");
        }
    }
}

double real_field(const json& obj, const std::string& key, const std::string& path) {
    const auto& v = obj.at(key);
    if (!v.is_number()) fail(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path, "must be finite");
    return d;
}

std::int64_t int_field(const json& obj, const std::string& key, const std::string& path) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<std::int64_t>();
}

std::array<double, 2> pair_field(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        fail(path, "expected a pair [a, b] of numbers");
    }
    const std::array<double, 2> out{v[0].get<double>(), v[1].get<double>()};
    if (!std::isfinite(out[0]) || !std::isfinite(out[1])) fail(path, "must be finite");
    return out;
}

std::vector<std::array<double, 2>> expand_grid(const json& g) {
    if (!g.is_object()) fail("grid", "expected an object");
    reject_unknown(g, "grid", {"x_range", "y_range", "nx", "ny"});
    for (const char* k : {"x_range", "y_range", "nx", "ny"}) {
        if (!g.contains(k)) fail(std::string("grid.") + k, "missing");
    }
    const auto xr = pair_field(g.at("x_range"), "grid.x_range");
    const auto yr = pair_field(g.at("y_range"), "grid.y_range");
    const auto nx = int_field(g, "nx", "grid.nx");
    const auto ny = int_field(g, "ny", "grid.ny");
    if (nx <= 0) fail("grid.nx", "must be > 0");
    if (ny <= 0) fail("grid.ny", "must be > 0");
    const auto node = [](const std::array<double, 2>& r, std::int64_t n, std::int64_t i) {
        return n == 1 ? r[0] : r[0] + (r[1] - r[0]) * static_cast<double>(i) / static_cast<double>(n - 1);
    };
    std::vector<std::array<double, 2>> out;
    for (std::int64_t j = 0; j < ny; ++j) {
        for (std::int64_t i = 0; i < nx; ++i) out.push_back({node(xr, nx, i), node(yr, ny, j)});
    }
    return out;
}

duffing_integrator_config parse_integrator(const json& j) {
    duffing_integrator_config cfg = duffing_default_config();
    if (!j.is_object()) fail("integrator", "expected an object");
    reject_unknown(j, "integrator", {"method", "step", "rel_tol", "abs_tol", "max_steps"});
    if (j.contains("method")) {
        const auto& m = j.at("method");
        if (m == "rk4_fixed") {
            cfg.method = DUFFING_RK4_FIXED;
        } else if (m == "rk45_adaptive") {
            cfg.method = DUFFING_RK45_ADAPTIVE;
        } else {
            fail("integrator.method", "expected \"rk4_fixed\" or \"rk45_adaptive\"");
        }
    }
    const auto positive = [&](const char* key, double& into) {
        if (!j.contains(key)) return;
        into = real_field(j, key, std::string("integrator.") + key);
        if (!(into > 0.0)) fail(std::string("integrator.") + key, "must be > 0");
    };
    positive("step", cfg.step);
    positive("rel_tol", cfg.rel_tol);
    positive("abs_tol", cfg.abs_tol);
    if (j.contains("max_steps")) {
        cfg.max_steps = int_field(j, "max_steps", "integrator.max_steps");
        if (cfg.max_steps <= 0) fail("integrator.max_steps", "must be > 0");
    }
    return cfg;
}

OutputSpec parse_output(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    reject_unknown(j, path, {"kind", "format", "path"});
    for (const char* k : {"kind", "format", "path"}) {
        if (!j.contains(k) || !j.at(k).is_string()) fail(path + "." + k, "expected a string");
    }
    OutputSpec out;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "original") {
        out.kind = OutputKind::Original;
    } else if (kind == "covered") {
        out.kind = OutputKind::Covered;
    } else if (kind == "energy_angle") {
        out.kind = OutputKind::EnergyAngle;
    } else {
        fail(path + ".kind", "expected \"original\", \"covered\" or \"energy_angle\"");
    }
    const auto format = j.at("format").get<std::string>();
    if (format == "csv") {
        out.format = OutputFormat::Csv;
    } else if (format == "svg") {
        out.format = OutputFormat::Svg;
    } else {
        fail(path + ".format", "expected \"csv\" or \"svg\"");
    }
    out.path = j.at("path").get<std::string>();
    if (out.path.empty()) fail(path + ".path", "must not be empty");
    return out;
}

std::string location_of(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

std::string describe(const std::array<double, 2>& s) {
    return "(" + format_real(s[0]) + ", " + format_real(s[1]) + ")";
}

Orbit integrate_one(const std::array<double, 2>& s0, const duffing_params& p,
                    const duffing_integrator_config& cfg, bool want_energy_angle) {
    duffing_trajectory* traj = nullptr;
    const auto status = duffing_integrate_original(s0[0], s0[1], &p, &cfg, &traj);
    if (status != DUFFING_OK) {
        throw IntegrationError("integration failed for initial state " + describe(s0) + ": " +
                               duffing_last_error());
    }
    Orbit orbit;
    orbit.initial = s0;
    const std::size_t n = duffing_trajectory_size(traj);
    orbit.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) duffing_trajectory_sample(traj, i, &orbit.samples[i]);
    if (want_energy_angle) {
        std::size_t count = 0;
        orbit.energy_angle.resize(n);
        const auto st = duffing_trajectory_energy_angle(traj, orbit.energy_angle.data(), n, &count);
        if (st != DUFFING_OK) {
            const std::string msg = duffing_last_error();
            duffing_trajectory_free(traj);
            throw IntegrationError("energy-angle curve failed for initial state " + describe(s0) + ": " + msg);
        }
        orbit.energy_angle.resize(count);
    }
    duffing_trajectory_free(traj);
    return orbit;
}

// Polyline vertices in viewBox coordinates (data y flipped), split into runs
// of equal colour.
struct Run {
    std::vector<std::array<double, 2>> pts;
    const char* stroke;
};

std::vector<Run> runs_of(OutputKind kind, const Orbit& orbit) {
    std::vector<Run> runs;
    if (kind == OutputKind::EnergyAngle) {
        Run r{{}, "#1f77b4"};
        for (const auto& e : orbit.energy_angle) r.pts.push_back({e.theta_unwrapped, -e.h});
        runs.push_back(std::move(r));
        return runs;
    }
    if (kind == OutputKind::Original) {
        Run r{{}, "#222222"};
        for (const auto& s : orbit.samples) r.pts.push_back({s.x, -s.y});
        runs.push_back(std::move(r));
        return runs;
    }
    // Upper sheet red, Lower sheet green. Each run repeats the first vertex
    // of the next so the curve stays connected across the cut.
    for (std::size_t i = 0; i < orbit.samples.size(); ++i) {
        const auto& s = orbit.samples[i];
        const char* stroke = s.sheet == DUFFING_SHEET_UPPER ? "#d62728" : "#2ca02c";
        if (runs.empty() || runs.back().stroke != stroke) {
            if (!runs.empty()) runs.back().pts.push_back({s.x1, -s.y1});
            runs.push_back({{}, stroke});
        }
        runs.back().pts.push_back({s.x1, -s.y1});
    }
    return runs;
}

std::filesystem::path resolve(const std::filesystem::path& out_dir, const std::string& path) {
    const std::filesystem::path p(path);
    return p.is_absolute() ? p : out_dir / p;
}

std::string substitute_orbit(std::string path, std::size_t index) {
    const std::string token = "{orbit}";
    for (auto pos = path.find(token); pos != std::string::npos; pos = path.find(token)) {
        path.replace(pos, token.size(), std::to_string(index));
    }
    return path;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << content;
    if (!os) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError("syntax error at " + location_of(text, e.byte) + ": " + e.what());
    }
    if (!root.is_object()) throw ConfigError("top level must be a JSON object");
    reject_unknown(root, "",
                   {"description", "mu", "c", "initial_states", "grid", "t_max", "integrator", "outputs"});

    Scenario sc;
    if (root.contains("description")) {
        if (!root.at("description").is_string()) fail("description", "expected a string");
        sc.description = root.at("description").get<std::string>();
    }
    if (!root.contains("mu")) fail("mu", "missing");
    sc.mu = real_field(root, "mu", "mu");
    if (sc.mu < 0.0) fail("mu", "must be >= 0");
    if (root.contains("c")) sc.c = real_field(root, "c", "c");

    const bool has_list = root.contains("initial_states");
    const bool has_grid = root.contains("grid");
    if (has_list && has_grid) fail("grid", "give either initial_states or grid, not both");
    if (has_list) {
        const auto& list = root.at("initial_states");
        if (!list.is_array()) fail("initial_states", "expected an array of [x, y] pairs");
        for (std::size_t i = 0; i < list.size(); ++i) {
            sc.initial_states.push_back(pair_field(list[i], "initial_states[" + std::to_string(i) + "]"));
        }
    } else if (has_grid) {
        sc.initial_states = expand_grid(root.at("grid"));
    }
    if (sc.initial_states.empty()) fail(has_grid ? "grid" : "initial_states", "no initial states given");

    if (!root.contains("t_max")) fail("t_max", "missing");
    sc.t_max = real_field(root, "t_max", "t_max");
    if (!(sc.t_max > 0.0)) fail("t_max", "must be > 0");

    sc.integrator = root.contains("integrator") ? parse_integrator(root.at("integrator"))
                                                : duffing_default_config();
    sc.integrator.t_max = sc.t_max;

    if (!root.contains("outputs") || !root.at("outputs").is_array() || root.at("outputs").empty()) {
        fail("outputs", "expected a non-empty array");
    }
    const auto& outs = root.at("outputs");
    for (std::size_t i = 0; i < outs.size(); ++i) {
        sc.outputs.push_back(parse_output(outs[i], "outputs[" + std::to_string(i) + "]"));
    }
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot read " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    try {
        return parse_scenario(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::vector<Orbit> integrate_scenario(const Scenario& sc) {
    const duffing_params p{sc.mu, sc.c};
    const bool want_ea = std::any_of(sc.outputs.begin(), sc.outputs.end(),
                                     [](const OutputSpec& o) { return o.kind == OutputKind::EnergyAngle; });
    // Orbits are independent; results are gathered by index so output order
    // never depends on scheduling.
    const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
    std::vector<Orbit> orbits;
    orbits.reserve(sc.initial_states.size());
    for (std::size_t begin = 0; begin < sc.initial_states.size(); begin += width) {
        const std::size_t end = std::min(begin + width, sc.initial_states.size());
        std::vector<std::future<Orbit>> jobs;
        for (std::size_t i = begin; i < end; ++i) {
            jobs.push_back(std::async(std::launch::async, integrate_one, sc.initial_states[i], p,
                                      sc.integrator, want_ea));
        }
        std::optional<IntegrationError> first_error;
        for (auto& job : jobs) {
            try {
                orbits.push_back(job.get());
            } catch (const IntegrationError& e) {
                if (!first_error) first_error = e;
            }
        }
        if (first_error) throw *first_error;
    }
    return orbits;
}

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& os, OutputKind kind, const std::vector<const Orbit*>& orbits) {
    switch (kind) {
        case OutputKind::Original: os << "t,x,y\n"; break;
        case OutputKind::Covered: os << "t,x1,y1,sheet\n"; break;
        case OutputKind::EnergyAngle: os << "theta_unwrapped,h\n"; break;
    }
    for (const Orbit* orbit : orbits) {
        if (kind == OutputKind::EnergyAngle) {
            for (const auto& e : orbit->energy_angle) {
                os << format_real(e.theta_unwrapped) << ',' << format_real(e.h) << '\n';
            }
            continue;
        }
        for (const auto& s : orbit->samples) {
            if (kind == OutputKind::Original) {
                os << format_real(s.t) << ',' << format_real(s.x) << ',' << format_real(s.y) << '\n';
            } else {
                os << format_real(s.t) << ',' << format_real(s.x1) << ',' << format_real(s.y1) << ','
                   << (s.sheet == DUFFING_SHEET_UPPER ? 'U' : 'L') << '\n';
            }
        }
    }
}

std::string render_svg(OutputKind kind, const std::vector<const Orbit*>& orbits) {
    std::vector<std::vector<Run>> all;
    double lo_x = std::numeric_limits<double>::infinity();
    double lo_y = lo_x;
    double hi_x = -lo_x;
    double hi_y = -lo_x;
    for (const Orbit* orbit : orbits) {
        all.push_back(runs_of(kind, *orbit));
        for (const auto& run : all.back()) {
            for (const auto& pt : run.pts) {
                lo_x = std::min(lo_x, pt[0]);
                hi_x = std::max(hi_x, pt[0]);
                lo_y = std::min(lo_y, pt[1]);
                hi_y = std::max(hi_y, pt[1]);
            }
        }
    }
    if (!(lo_x <= hi_x)) {
        lo_x = lo_y = -1.0;
        hi_x = hi_y = 1.0;
    }
    double w = hi_x - lo_x;
    double h = hi_y - lo_y;
    if (w == 0.0) w = 1.0;
    if (h == 0.0) h = 1.0;
    const double vx = lo_x - 0.05 * w;
    const double vy = lo_y - 0.05 * h;
    const double vw = 1.1 * w;
    const double vh = 1.1 * h;

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"800\" "
       << "preserveAspectRatio=\"none\" viewBox=\"" << format_real(vx) << ' ' << format_real(vy) << ' '
       << format_real(vw) << ' ' << format_real(vh) << "\">\n";
    os << "<g stroke=\"#999999\" stroke-width=\"1\" vector-effect=\"non-scaling-stroke\">\n";
    if (vx <= 0.0 && 0.0 <= vx + vw) {
        os << "<line x1=\"0\" y1=\"" << format_real(vy) << "\" x2=\"0\" y2=\"" << format_real(vy + vh)
           << "\" vector-effect=\"non-scaling-stroke\"/>\n";
    }
    if (vy <= 0.0 && 0.0 <= vy + vh) {
        os << "<line x1=\"" << format_real(vx) << "\" y1=\"0\" x2=\"" << format_real(vx + vw)
           << "\" y2=\"0\" vector-effect=\"non-scaling-stroke\"/>\n";
    }
    os << "</g>\n";
    for (std::size_t i = 0; i < all.size(); ++i) {
        os << "<g id=\"orbit-" << i << "\" fill=\"none\" stroke-width=\"1.5\">\n";
        for (const auto& run : all[i]) {
            os << "<polyline stroke=\"" << run.stroke << "\" vector-effect=\"non-scaling-stroke\" points=\"";
            for (std::size_t k = 0; k < run.pts.size(); ++k) {
                if (k) os << ' ';
                os << format_real(run.pts[k][0]) << ',' << format_real(run.pts[k][1]);
            }
            os << "\"/>\n";
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_outputs(const Scenario& sc, const std::vector<Orbit>& orbits, const std::filesystem::path& out_dir) {
    for (const auto& out : sc.outputs) {
        std::vector<std::pair<std::string, std::vector<const Orbit*>>> files;
        if (out.path.find("{orbit}") != std::string::npos) {
            for (std::size_t i = 0; i < orbits.size(); ++i) {
                files.push_back({substitute_orbit(out.path, i), {&orbits[i]}});
            }
        } else {
            std::vector<const Orbit*> ptrs;
            for (const auto& o : orbits) ptrs.push_back(&o);
            files.push_back({out.path, ptrs});
        }
        for (const auto& [path, group] : files) {
            if (out.format == OutputFormat::Csv) {
                std::ostringstream os;
                write_csv(os, out.kind, group);
                write_file(resolve(out_dir, path), os.str());
            } else {
                write_file(resolve(out_dir, path), render_svg(out.kind, group));
            }
        }
    }
}

int run_command(const std::filesystem::path& config, const std::filesystem::path& out_dir, std::ostream& err) {
    Scenario sc;
    try {
        sc = load_scenario(config);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    }
    std::vector<Orbit> orbits;
    try {
        orbits = integrate_scenario(sc);
    } catch (const IntegrationError& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
    try {
        write_outputs(sc, orbits, out_dir);
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

int verify_command(const std::string& only, std::uint64_t seed, std::optional<double> tolerance,
                   std::ostream& out, std::ostream& err) {
    char* lines = nullptr;
    int all_passed = 0;
    const auto status = duffing_verify(only.empty() ? nullptr : only.c_str(), seed, tolerance.value_or(0.0),
                                       &lines, &all_passed);
    if (status != DUFFING_OK) {
        err << "verify: " << duffing_last_error() << '\n';
        return 1;
    }
    const std::string text = lines;
    duffing_string_free(lines);
    out << text;

    std::istringstream is(text);
    std::vector<std::string> failing;
    for (std::string line; std::getline(is, line);) {
        if (line.empty()) continue;
        const auto j = json::parse(line);
        if (!j.at("passed").get<bool>()) failing.push_back(j.at("name").get<std::string>());
    }
    if (!failing.empty() || !all_passed) {
        err << "failed checks:";
        for (const auto& f : failing) err << ' ' << f;
        err << '\n';
        return 1;
    }
    return 0;
}

int field_command(double x, double y, double mu, bool covered, std::ostream& out, std::ostream& err) {
    const duffing_params p{mu, 0.0};
    nlohmann::ordered_json j;
    double f[2];
    if (duffing_field(x, y, &p, f) != DUFFING_OK) {
        err << "field: " << duffing_last_error() << '\n';
        return 1;
    }
    j["x"] = x;
    j["y"] = y;
    j["field"] = {f[0], f[1]};
    double h = 0.0;
    duffing_hamiltonian(x, y, &p, &h);
    j["h"] = h;
    if (covered) {
        double x1 = 0.0;
        double y1 = 0.0;
        duffing_sheet sheet = DUFFING_SHEET_UPPER;
        duffing_cover_map(x, y, &x1, &y1, &sheet);
        double g[2];
        duffing_covered_field(x1, y1, sheet, &p, g);
        j["x1"] = x1;
        j["y1"] = y1;
        j["sheet"] = sheet == DUFFING_SHEET_UPPER ? "U" : "L";
        j["covered_field"] = {g[0], g[1]};
        double theta = 0.0;
        double theta_dot = 0.0;
        if (duffing_theta(x, y, &theta) == DUFFING_OK && duffing_theta_dot(x, y, &theta_dot) == DUFFING_OK) {
            j["theta"] = theta;
            j["theta_dot"] = theta_dot;
        }
    }
    out << j.dump() << '\n';
    return 0;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("DUFFING_SEED")) {
        char* end = nullptr;
        const auto v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0') return v;
    }
    return 42;
}

}  // namespace duffing::cli
