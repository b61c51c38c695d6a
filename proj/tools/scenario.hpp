#pragma once

// Scenario files and figure emission for the duffing command-line tool.
// Everything here talks to the library through its C interface.

#include "duffing/duffing.h"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace duffing::cli {

enum class OutputKind { Original, Covered, EnergyAngle };
enum class OutputFormat { Csv, Svg };

struct OutputSpec {
    OutputKind kind = OutputKind::Original;
    OutputFormat format = OutputFormat::Csv;
    std::string path;  // may contain "{orbit}" for one file per initial state
};

struct Scenario {
    std::string description;
    double mu = 0.0;
    double c = 0.0;
    std::vector<std::array<double, 2>> initial_states;  // grid specs are expanded here
    double t_max = 0.0;
    duffing_integrator_config integrator{};
    std::vector<OutputSpec> outputs;
};

/// Malformed or invalid configuration. what() carries "line L, column C" for
/// syntax errors and the offending field path otherwise.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Integration failure for one initial state (what() names the state).
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

[[nodiscard]] Scenario parse_scenario(std::string_view text);
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path);

struct Orbit {
    std::array<double, 2> initial{};
    std::vector<duffing_sample> samples;
    std::vector<duffing_energy_angle> energy_angle;  // filled when requested
};

/// Integrates every initial state; orbits come back in initial-state order.
[[nodiscard]] std::vector<Orbit> integrate_scenario(const Scenario& sc);

/// Shortest decimal that round-trips an IEEE double (17 significant digits).
[[nodiscard]] std::string format_real(double v);

void write_csv(std::ostream& os, OutputKind kind, const std::vector<const Orbit*>& orbits);
[[nodiscard]] std::string render_svg(OutputKind kind, const std::vector<const Orbit*>& orbits);

/// Writes every output of the scenario below `out_dir`; relative paths are
/// resolved against it.
void write_outputs(const Scenario& sc, const std::vector<Orbit>& orbits,
                   const std::filesystem::path& out_dir);

/// Exit codes: 0 ok, 2 configuration error, 3 integration failure.
int run_command(const std::filesystem::path& config, const std::filesystem::path& out_dir,
                std::ostream& err);

/// Exit 0 iff every check passed; JSON lines on `out`, failures on `err`.
int verify_command(const std::string& only, std::uint64_t seed, std::optional<double> tolerance,
                   std::ostream& out, std::ostream& err);

int field_command(double x, double y, double mu, bool covered, std::ostream& out, std::ostream& err);

/// DUFFING_SEED when set and numeric, else 42.
[[nodiscard]] std::uint64_t default_seed();

}  // namespace duffing::cli
