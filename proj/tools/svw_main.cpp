// Command-line front end for the viscous variational wave simulator:
// single runs, ensembles, and the verification studies. Every subcommand
// writes a JSON report, CSV curves, and a manifest under --output-dir and
// exits nonzero on any failed assertion or blow-up (the report is still
// written when possible).

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "svw/experiments.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    unsigned workers = 1;
    std::optional<std::string> output_dir;
    std::optional<int> modes;
    std::optional<double> dt;
    std::optional<double> nu;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "Path to a config file");
    cmd->add_option("--seed", opts.seed, "Override the run seed");
    cmd->add_option("--workers", opts.workers, "Worker thread count (wall time only)");
    cmd->add_option("--output-dir", opts.output_dir, "Artifact directory");
    cmd->add_option("--modes", opts.modes, "Override the Galerkin order N");
    cmd->add_option("--dt", opts.dt, "Override the time step");
    cmd->add_option("--nu", opts.nu, "Override the viscosity");
}

// Defaults used when no config file is given: a smooth noisy run that every
// subcommand can operate on.
const char* default_config_text = R"(
[run]
order = 64
nu = 0.05
T = 0.25
dt = 6.103515625e-05   # T / 2^12
seed = 1
sample_cadence = 16

[speed]
kind = cosine

[sigma]
kind = sine
a = 0.2
b = 0.1

[initial]
kind = modes
r_modes = sin:1:0.5, cos:2:0.2
s_modes = sin:1:-0.5
)";

int load_config(const CommonOpts& opts, svw::SimConfig& cfg) {
    svw::ConfigResult parsed = opts.config_path.empty()
                                   ? svw::parse_config(default_config_text)
                                   : svw::parse_config_file(opts.config_path);
    if (!parsed.ok()) {
        std::cerr << "invalid configuration:\n";
        for (const auto& issue : parsed.issues) std::cerr << "  " << issue << "\n";
        return 2;
    }
    cfg = *parsed.config;
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.output_dir) cfg.output_dir = *opts.output_dir;
    if (opts.modes) cfg.order = *opts.modes;
    if (opts.dt) cfg.dt = *opts.dt;
    if (opts.nu) cfg.nu = *opts.nu;
    return 0;
}

int report_outcome(const svw::ExperimentResult& result, const svw::SimConfig& cfg,
                   const std::string& name) {
    std::cout << name << ": " << (result.pass ? "pass" : "FAIL") << "  (artifacts in "
              << cfg.output_dir << ")\n";
    return result.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral-Galerkin simulator for the viscous variational wave equation "
                 "with transport noise on the 1-D torus"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::size_t paths = 32;
    std::size_t seed_count = 16;
    std::vector<double> deltas = {0.2, 0.1, 0.05, 0.025, 0.0125};
    std::vector<int> orders = {32, 64, 128, 256};
    double moment_p = 2.0;
    bool dump_fields = false;

    auto* c_sim = app.add_subcommand("simulate", "Integrate one trajectory");
    c_sim->add_flag("--dump-fields", dump_fields, "Also write the final spectral fields");
    auto* c_ens = app.add_subcommand("ensemble", "Moment ensemble over seeds");
    c_ens->add_option("--paths", paths, "Number of Monte Carlo paths");
    c_ens->add_option("--moment-p", moment_p, "Moment exponent");
    auto* c_energy = app.add_subcommand("energy-check", "Noiseless energy identity");
    auto* c_comm = app.add_subcommand("commutator-study", "Mollifier commutator decay");
    c_comm->add_option("--deltas", deltas, "Decreasing mollification widths");
    auto* c_conv = app.add_subcommand("convergence-study", "Shared-noise convergence in N");
    c_conv->add_option("--orders", orders, "Increasing Galerkin orders");
    c_conv->add_option("--paths", seed_count, "Number of shared-noise seeds");
    auto* c_cut = app.add_subcommand("cutoff-check", "Cut-off vs divergence-form equivalence");
    auto* c_hold = app.add_subcommand("holder-study", "Temporal Holder diagnostic in H^-3");
    c_hold->add_option("--paths", seed_count, "Number of seeds");
    auto* c_cont = app.add_subcommand("continuity-study", "Temporal L2 continuity modulus");
    for (auto* cmd : {c_sim, c_ens, c_energy, c_comm, c_conv, c_cut, c_hold, c_cont})
        add_common(cmd, opts);

    CLI11_PARSE(app, argc, argv);

    svw::SimConfig cfg;
    if (int rc = load_config(opts, cfg)) return rc;

    try {
        if (c_sim->parsed())
            return report_outcome(svw::run_simulate(cfg, dump_fields), cfg, "simulate");
        if (c_ens->parsed())
            return report_outcome(svw::run_ensemble(cfg, paths, moment_p, opts.workers), cfg,
                                  "ensemble");
        if (c_energy->parsed())
            return report_outcome(svw::run_energy_check(cfg), cfg, "energy-check");
        if (c_comm->parsed())
            return report_outcome(svw::run_commutator_study(cfg, deltas), cfg,
                                  "commutator-study");
        if (c_conv->parsed())
            return report_outcome(
                svw::run_convergence_study(cfg, orders, seed_count, opts.workers), cfg,
                "convergence-study");
        if (c_cut->parsed())
            return report_outcome(svw::run_cutoff_check(cfg), cfg, "cutoff-check");
        if (c_hold->parsed())
            return report_outcome(svw::run_holder_study(cfg, seed_count, opts.workers), cfg,
                                  "holder-study");
        if (c_cont->parsed())
            return report_outcome(svw::run_continuity_study(cfg), cfg, "continuity-study");
    } catch (const svw::blow_up_error& e) {
        std::cerr << "blow-up: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
