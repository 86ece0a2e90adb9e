#pragma once

#include "jcipa/core.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jcipa::cli {

inline constexpr std::string_view kToolVersion = "jcipa 1.0.0";

enum class Scenario {
    fig1_sqrt_coupling,
    fig2_vacuum_ipa_coherent,
    fig3_deformed_deltas,
    fig4_cos_squared_fock,
    fig5_roundtrip_demo,
    fig6_thermal,
    sweep,
};

std::string_view to_string(Scenario s);
/// Throws ConfigError listing the valid names.
Scenario parse_scenario(std::string_view name);
const std::vector<Scenario>& all_scenarios();

struct ScenarioConfig {
    Scenario scenario = Scenario::fig2_vacuum_ipa_coherent;
    PhysicalParams params{1.0, 1.0, 5e-4, 5.0, 0.0};
    double t_start = 0.0;
    /// Unset fields fall back to the scenario's default span.
    std::optional<double> t_end;
    std::optional<std::size_t> samples;
    std::string output_path = "out.csv";
    double tail_tol = kDefaultTailTol;
    double eta = 1e-6;
    double max_residual = 1e-4;
    /// Photon number of the Fock-state scenario.
    int fock_n = 5;
    /// Number of epsilon values in [0, epsilon] for the sweep.
    std::size_t sweep_points = 5;
    /// Sector-parallel worker threads; 0 uses the hardware count.
    unsigned threads = 0;

    TimeGrid grid() const;
    /// Throws ConfigError naming the offending field; returns soft warnings.
    std::vector<std::string> validate() const;
};

/// Default [t_start, t_end] x samples for a scenario.
struct GridDefaults {
    double t_end;
    std::size_t samples;
};
GridDefaults default_grid(Scenario s);

/// Applies one `key = value` assignment. Throws ConfigError naming the field.
void assign(ScenarioConfig& config, std::string_view key, std::string_view value);

/// Reads a flat key-value file (`key = value`, `#` comments). Diagnostics
/// carry the file name and line number.
ScenarioConfig load_config(const std::string& path, ScenarioConfig base = {});
ScenarioConfig parse_config(std::istream& in, const std::string& source_name,
                            ScenarioConfig base = {});

/// Writes the effective parameter set, including defaults.
void print_effective(std::ostream& os, const ScenarioConfig& config);

struct RunOutcome {
    int exit_status = 0;
    double max_residual_outside = 0.0;
    std::vector<std::string> files;
};

/// Runs the scenario and writes its CSV. Exit status 2 when the residual
/// outside regularized windows exceeds config.max_residual, 0 otherwise;
/// library errors propagate as exceptions.
RunOutcome run(const ScenarioConfig& config);

/// 17 significant digits, locale independent.
std::string format_number(double x);

}  // namespace jcipa::cli
