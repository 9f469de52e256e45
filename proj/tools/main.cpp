#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <bellsim/bellsim.hpp>

namespace {

int run_simulate(const bellsim::RunConfig& cfg) {
    using namespace bellsim;
    const ProtocolRun run = run_protocol_trials(
        MasterSeed{cfg.seed}, cfg.trials, Angle{cfg.theta_a}, Angle{cfg.theta_b},
        0, cfg.threads, cfg.max_iterations);
    const CommunicationStats comm = make_communication_stats(
        run.k_counts, cfg.codec, protocol_acceptance_probability());
    std::cout << simulate_report(cfg, run, comm).dump(2) << "\n";
    return 0;
}

int run_sweep_cmd(const bellsim::RunConfig& cfg, const std::string& format) {
    using namespace bellsim;
    const std::vector<SweepPoint> rows =
        run_sweep(MasterSeed{cfg.seed}, cfg.trials, cfg.sweep_points,
                  cfg.threads, cfg.max_iterations);
    if (format == "csv") {
        std::cout << sweep_csv(rows);
    } else {
        std::cout << sweep_report(cfg, rows).dump(2) << "\n";
    }
    return 0;
}

int run_chsh_cmd(const bellsim::RunConfig& cfg) {
    using namespace bellsim;
    const ChshEstimate protocol_est =
        run_protocol_chsh(MasterSeed{cfg.seed}, cfg.trials,
                          standard_chsh_angles(), cfg.threads,
                          cfg.max_iterations);
    const ChshEstimate lhv_est = run_lhv_chsh(
        MasterSeed{cfg.seed}, cfg.trials, standard_chsh_angles(), cfg.threads);
    std::cout << chsh_report(cfg, protocol_est, lhv_est).dump(2) << "\n";
    return 0;
}

int run_oracle_cmd() {
    using namespace bellsim;
    const OracleChecks checks = run_oracle_checks();
    std::cout << oracle_report(checks).dump(2) << "\n";
    return checks.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Deterministic simulator of a two-party protocol that reproduces the "
        "singlet cosine correlation locally, paying for it with one short "
        "classical message per trial."};
    app.require_subcommand(1);

    bellsim::RunConfig cfg;
    std::string codec = "unary";
    std::string format = "json";

    auto* simulate = app.add_subcommand(
        "simulate", "Run one angle pair; report correlation, marginals, and "
                    "communication cost");
    auto* sweep = app.add_subcommand(
        "sweep", "Sweep the setting difference over an even grid");
    auto* chsh = app.add_subcommand(
        "chsh", "Estimate the CHSH combination for the protocol and for the "
                "no-communication baseline");
    auto* oracle = app.add_subcommand(
        "oracle", "Verify the quadrature reference against the closed form; "
                  "exit 0 only if every check passes");

    for (CLI::App* cmd : {simulate, sweep, chsh}) {
        cmd->add_option("--seed", cfg.seed, "Master seed")
            ->capture_default_str();
        cmd->add_option("--max-iterations", cfg.max_iterations,
                        "Abort a trial after this many rejection iterations")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--threads", cfg.threads,
                        "Worker threads; never affects the output bytes")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    }
    simulate->add_option("--trials", cfg.trials, "Number of trials")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sweep->add_option("--trials", cfg.trials, "Trials per sweep point")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    chsh->add_option("--trials", cfg.trials, "Trials per correlator")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    simulate->add_option("--theta-a", cfg.theta_a,
                         "First party's setting, radians")
        ->capture_default_str();
    simulate->add_option("--theta-b", cfg.theta_b,
                         "Second party's setting, radians")
        ->capture_default_str();
    simulate->add_option("--codec", codec, "Message codec")
        ->check(CLI::IsMember({"unary", "golomb"}))
        ->capture_default_str();
    sweep->add_option("--sweep-points", cfg.sweep_points, "Grid size")
        ->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 20))
        ->capture_default_str();

    for (CLI::App* cmd : {simulate, sweep, chsh, oracle}) {
        cmd->add_option("--format", format, "Output format")
            ->check(CLI::IsMember({"json", "csv"}))
            ->capture_default_str();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (format == "csv" && !sweep->parsed()) {
            std::cerr << "error: csv output is only available for the sweep "
                         "command\n";
            return 2;
        }
        if (simulate->parsed()) {
            cfg.codec = *bellsim::parse_codec(codec);
            return run_simulate(cfg);
        }
        if (sweep->parsed()) {
            return run_sweep_cmd(cfg, format);
        }
        if (chsh->parsed()) {
            return run_chsh_cmd(cfg);
        }
        return run_oracle_cmd();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
