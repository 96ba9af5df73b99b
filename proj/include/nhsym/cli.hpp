#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nhsym/core.hpp"
#include "nhsym/hamiltonian.hpp"
#include "nhsym/invariants.hpp"

namespace nhsym::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kDomainError = 3, kNumericalRefusal = 4 };

class ConfigError : public InputError {
public:
    using InputError::InputError;
};

struct GridConfig {
    Index n = 63;
    double x_max = 10.0;
    double hbar = 1.0;
    double mass = 1.0;
};

struct TimesConfig {
    double t_max = 1.0;
    Index samples = 11;

    std::vector<double> grid() const;
};

struct InitialStateConfig {
    enum class Kind { Gaussian, File, Components };
    Kind kind = Kind::Gaussian;
    double center = 0.0;
    double width = 1.0;
    double momentum = 0.0;
    std::filesystem::path path;
    std::vector<double> re;
    std::vector<double> im;
};

struct InvariantConfig {
    enum class Schedule { DrivenTwoLevel, Static };
    enum class Initial { Hamiltonian, IdentityPerturbation };
    Schedule schedule = Schedule::DrivenTwoLevel;
    InvariantVariant variant = InvariantVariant::Plain;
    Initial initial = Initial::Hamiltonian;
    double detuning = 1.0;
    double drive = 1.0;
    double frequency = 1.0;
    double loss = 0.0;
    double epsilon = 0.1;
    double step = 0.0;  // <= 0: 1e-3 of the window
};

/// Parsed from one JSON document; unknown keys are rejected.
struct RunConfig {
    GridConfig grid;
    std::optional<PotentialSpec> potential;
    double tolerance = 1e-10;
    TimesConfig times;
    InitialStateConfig initial_state;
    std::filesystem::path outputs = ".";
    std::optional<InvariantConfig> invariant;
};

/// Relative paths inside the document resolve against base_dir.
/// Throws ConfigError.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");
RunConfig load_config(const std::filesystem::path& path);

Grid make_grid_from(const RunConfig& config);
Operator hamiltonian_from(const RunConfig& config);
Vector initial_state_from(const RunConfig& config, Index dim);
HamiltonianSchedule schedule_from(const RunConfig& config);

int cmd_classify(const RunConfig& config);
int cmd_spectrum(const RunConfig& config);
int cmd_evolve(const RunConfig& config);
int cmd_group_check(const RunConfig& config);
int cmd_invariant(const RunConfig& config, bool halve_step);

/// Full command line: `<cmd> --config <path> [--out <dir>] [--halve-step]`.
/// Diagnostics go to stderr; returns the exit code.
int run(int argc, const char* const* argv);

}  // namespace nhsym::cli
