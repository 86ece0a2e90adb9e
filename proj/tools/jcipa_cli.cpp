// Scenario runner: synthesizes couplings for prescribed population inversions,
// propagates them, and writes the round trip as CSV.

#include "jcipa/error.hpp"
#include "jcipa/scenario.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <unistd.h>

namespace {

bool use_color() {
    const char* no_color = std::getenv("NO_COLOR");
    if (no_color && *no_color) return false;
    return ::isatty(STDERR_FILENO) != 0;
}

void report(std::string_view level, std::string_view message) {
    const bool color = use_color();
    const char* tint = level == "error" ? "\033[31m" : "\033[33m";
    std::cerr << (color ? tint : "") << level << (color ? "\033[0m" : "") << ": " << message
              << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    using namespace jcipa;

    CLI::App app{"Inverse-problem coupling synthesis for the Jaynes-Cummings model"};
    app.set_version_flag("--version", std::string(cli::kToolVersion));

    std::optional<std::string> scenario, config_path, out;
    std::optional<double> lambda0, zeta, mean_n, epsilon, t_end, tail_tol, eta, max_residual;
    std::optional<long long> samples, threads, fock_n;
    bool validate_only = false;

    app.add_option("--scenario", scenario,
                   "fig1_sqrt_coupling | fig2_vacuum_ipa_coherent | fig3_deformed_deltas | "
                   "fig4_cos_squared_fock | fig5_roundtrip_demo | fig6_thermal | sweep");
    app.add_option("--config", config_path, "flat key = value file; flags override it");
    app.add_option("--out", out, "CSV output path");
    app.add_option("--lambda0", lambda0, "coupling amplitude");
    app.add_option("--zeta", zeta, "time-scale rate of the sqrt(t) coupling");
    app.add_option("--mean-n", mean_n, "mean photon number");
    app.add_option("--epsilon", epsilon, "deformation parameter (<= 1e-2)");
    app.add_option("--t-end", t_end, "end of the time grid");
    app.add_option("--samples", samples, "number of grid points");
    app.add_option("--tail-tol", tail_tol, "photon-distribution tail tolerance");
    app.add_option("--eta", eta, "singularity threshold on sqrt(1 - W^2)");
    app.add_option("--max-residual", max_residual, "exit 2 above this residual (default 1e-4)");
    app.add_option("--fock-n", fock_n, "photon number for fig4_cos_squared_fock");
    app.add_option("--threads", threads, "sector-parallel worker threads (0 = hardware)");
    app.add_flag("--validate-only", validate_only, "print the effective configuration and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        cli::ScenarioConfig config;
        if (config_path) config = cli::load_config(*config_path);

        auto set = [&](std::string_view key, const auto& value) {
            if (!value) return;
            if constexpr (std::is_same_v<std::decay_t<decltype(*value)>, std::string>) {
                cli::assign(config, key, *value);
            } else if constexpr (std::is_same_v<std::decay_t<decltype(*value)>, double>) {
                cli::assign(config, key, cli::format_number(*value));
            } else {
                cli::assign(config, key, std::to_string(*value));
            }
        };
        set("scenario", scenario);
        set("out", out);
        set("lambda0", lambda0);
        set("zeta", zeta);
        set("mean_n", mean_n);
        set("epsilon", epsilon);
        set("t_end", t_end);
        set("samples", samples);
        set("tail_tol", tail_tol);
        set("eta", eta);
        set("max_residual", max_residual);
        set("fock_n", fock_n);
        set("threads", threads);

        for (const std::string& w : config.validate()) report("warning", w);
        if (validate_only) {
            cli::print_effective(std::cout, config);
            return 0;
        }

        const cli::RunOutcome outcome = cli::run(config);
        if (outcome.exit_status == 2) {
            report("error", "max residual outside regularized windows " +
                                cli::format_number(outcome.max_residual_outside) +
                                " exceeds --max-residual " +
                                cli::format_number(config.max_residual));
        }
        return outcome.exit_status;
    } catch (const std::exception& e) {
        report("error", e.what());
        return 1;
    }
}
