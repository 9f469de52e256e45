#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bellsim/angle.hpp"
#include "bellsim/coding.hpp"
#include "bellsim/experiment.hpp"
#include "bellsim/protocol.hpp"
#include "bellsim/quadrature.hpp"

namespace bellsim {

// Report assembly. Everything here is deterministic down to the byte:
// JSON objects serialize with sorted keys and shortest round-trip
// numbers, CSV uses shortest round-trip formatting, and no field
// depends on thread count, wall time, or host.

inline constexpr int report_schema_version = 1;

/// Shortest decimal form that parses back to exactly the same double.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string codec_name(Codec codec) {
    return codec == Codec::golomb ? "golomb" : "unary";
}

inline std::optional<Codec> parse_codec(std::string_view name) {
    if (name == "unary") return Codec::unary;
    if (name == "golomb") return Codec::golomb;
    return std::nullopt;
}

/// Settings shared by the CLI commands. `threads` only partitions the
/// work and is deliberately absent from every report.
struct RunConfig {
    std::uint64_t seed = 42;
    std::uint64_t trials = 100000;
    double theta_a = 0.0;
    double theta_b = std::numbers::pi / 3.0;
    Codec codec = Codec::unary;
    std::uint64_t sweep_points = 16;
    std::uint64_t max_iterations = default_iteration_cap;
    unsigned threads = 1;
};

namespace detail {

inline double marginal_stderr(double e, std::uint64_t trials) {
    if (trials < 2) return 0.0;
    const double n = static_cast<double>(trials);
    return std::sqrt(std::max(0.0, 1.0 - e * e) / (n - 1.0));
}

inline nlohmann::json correlation_json(const CorrelationEstimate& est,
                                       double analytic) {
    return nlohmann::json{
        {"e_ab", est.e_ab},           {"e_a", est.e_a},
        {"e_b", est.e_b},             {"stderr_ab", est.stderr_ab},
        {"analytic", analytic},
    };
}

inline nlohmann::json chsh_side_json(const ChshEstimate& est) {
    return nlohmann::json{
        {"e_ab", est.ab.e_ab},
        {"e_ab_prime", est.ab_prime.e_ab},
        {"e_a_prime_b", est.a_prime_b.e_ab},
        {"e_a_prime_b_prime", est.a_prime_b_prime.e_ab},
        {"s", est.s},
        {"abs_s", std::abs(est.s)},
    };
}

inline double chsh_stderr(const ChshEstimate& est) {
    return std::sqrt(est.ab.stderr_ab * est.ab.stderr_ab +
                     est.ab_prime.stderr_ab * est.ab_prime.stderr_ab +
                     est.a_prime_b.stderr_ab * est.a_prime_b.stderr_ab +
                     est.a_prime_b_prime.stderr_ab *
                         est.a_prime_b_prime.stderr_ab);
}

}  // namespace detail

/// Report for one angle pair: correlation block, communication block,
/// and self-checks.
inline nlohmann::json simulate_report(const RunConfig& cfg,
                                      const ProtocolRun& run,
                                      const CommunicationStats& comm) {
    const Angle theta_a{cfg.theta_a};
    const Angle theta_b{cfg.theta_b};
    const double analytic =
        -std::cos(theta_a.radians() - theta_b.radians());
    const double p = protocol_acceptance_probability();
    const double h_geometric = geometric_entropy_bits(p);

    const GofResult gof = chi_square_geometric_fit(run.k_counts, p);
    const CorrelationEstimate& est = run.correlation;
    const bool correlation_ok =
        std::abs(est.e_ab - analytic) <= 5.0 * est.stderr_ab;
    const bool marginals_ok =
        std::abs(est.e_a) <= 5.0 * detail::marginal_stderr(est.e_a, est.trials) &&
        std::abs(est.e_b) <= 5.0 * detail::marginal_stderr(est.e_b, est.trials);

    nlohmann::json j;
    j["schema_version"] = report_schema_version;
    j["config"] = {
        {"command", "simulate"},
        {"seed", cfg.seed},
        {"trials", cfg.trials},
        {"theta_a", theta_a.radians()},
        {"theta_b", theta_b.radians()},
        {"codec", codec_name(cfg.codec)},
        {"max_iterations", cfg.max_iterations},
    };
    j["correlation"] = detail::correlation_json(est, analytic);
    j["communication"] = {
        {"mean_k", comm.mean_k},
        {"p_hat", comm.p_hat},
        {"empirical_entropy_bits", comm.empirical_entropy_bits},
        {"geometric_entropy_bits", h_geometric},
        {"mean_codec_bits", comm.mean_codec_bits},
        {"codec", codec_name(comm.codec)},
        {"c_h_avg_upper_bound_bits", h_geometric},
    };
    j["checks"] = {
        {"correlation_within_5_stderr", correlation_ok},
        {"marginals_within_5_stderr", marginals_ok},
        {"geometric_gof_p_value", gof.p_value},
        {"geometric_gof_pass_at_0_01", gof.p_value >= 0.01},
    };
    return j;
}

inline nlohmann::json sweep_row_json(const SweepPoint& row) {
    return nlohmann::json{
        {"delta_radians", row.delta_radians},
        {"e_ab_mc", row.estimate.e_ab},
        {"stderr", row.estimate.stderr_ab},
        {"e_ab_analytic", row.analytic},
        {"e_ab_oracle", row.oracle},
    };
}

inline nlohmann::json sweep_report(const RunConfig& cfg,
                                   const std::vector<SweepPoint>& rows) {
    nlohmann::json j;
    j["schema_version"] = report_schema_version;
    j["config"] = {
        {"command", "sweep"},
        {"seed", cfg.seed},
        {"trials", cfg.trials},
        {"sweep_points", cfg.sweep_points},
        {"max_iterations", cfg.max_iterations},
    };
    j["sweep"] = nlohmann::json::array();
    for (const auto& row : rows) j["sweep"].push_back(sweep_row_json(row));
    return j;
}

inline constexpr std::string_view sweep_csv_header =
    "delta_radians,e_ab_mc,stderr,e_ab_analytic,e_ab_oracle";

inline std::string sweep_csv(const std::vector<SweepPoint>& rows) {
    std::string out{sweep_csv_header};
    out.push_back('\n');
    for (const auto& row : rows) {
        out += format_double(row.delta_radians);
        out.push_back(',');
        out += format_double(row.estimate.e_ab);
        out.push_back(',');
        out += format_double(row.estimate.stderr_ab);
        out.push_back(',');
        out += format_double(row.analytic);
        out.push_back(',');
        out += format_double(row.oracle);
        out.push_back('\n');
    }
    return out;
}

inline nlohmann::json chsh_report(const RunConfig& cfg,
                                  const ChshEstimate& protocol_est,
                                  const ChshEstimate& lhv_est) {
    const ChshAngles angles = standard_chsh_angles();
    const double quantum_abs_s = 2.0 * std::numbers::sqrt2;
    const bool protocol_ok = std::abs(std::abs(protocol_est.s) - quantum_abs_s) <=
                             5.0 * detail::chsh_stderr(protocol_est);
    const bool lhv_ok = std::abs(std::abs(lhv_est.s) - 2.0) <=
                        5.0 * detail::chsh_stderr(lhv_est);

    nlohmann::json j;
    j["schema_version"] = report_schema_version;
    j["config"] = {
        {"command", "chsh"},
        {"seed", cfg.seed},
        {"trials", cfg.trials},
        {"max_iterations", cfg.max_iterations},
        {"angles",
         {
             {"a", angles.a.radians()},
             {"a_prime", angles.a_prime.radians()},
             {"b", angles.b.radians()},
             {"b_prime", angles.b_prime.radians()},
         }},
    };
    j["chsh"] = {
        {"protocol", detail::chsh_side_json(protocol_est)},
        {"lhv", detail::chsh_side_json(lhv_est)},
        {"analytic",
         {
             {"protocol_abs_s", quantum_abs_s},
             {"lhv_abs_s", 2.0},
         }},
    };
    j["checks"] = {
        {"protocol_matches_quantum_value", protocol_ok},
        {"lhv_matches_classical_bound", lhv_ok},
    };
    return j;
}

/// Quadrature self-checks behind the `oracle` command.
struct OracleChecks {
    std::uint64_t grid_points = 64;
    double tolerance = 1e-9;
    double max_correlation_error = 0.0;
    double max_marginal_error = 0.0;
    bool pass = false;
};

inline OracleChecks run_oracle_checks(std::uint64_t grid_points = 64,
                                      double tolerance = 1e-9) {
    OracleChecks checks;
    checks.grid_points = grid_points;
    checks.tolerance = tolerance;
    for (std::uint64_t j = 0; j < grid_points; ++j) {
        const double delta = two_pi * static_cast<double>(j) /
                             static_cast<double>(grid_points);
        const Angle theta_a{delta};
        const Angle theta_b{0.0};
        const double corr_err =
            std::abs(quadrature_correlation(theta_a, theta_b) - (-std::cos(delta)));
        const double marg_err = std::max(
            std::abs(quadrature_marginal(Party::a, theta_a, theta_b)),
            std::abs(quadrature_marginal(Party::b, theta_a, theta_b)));
        checks.max_correlation_error =
            std::max(checks.max_correlation_error, corr_err);
        checks.max_marginal_error = std::max(checks.max_marginal_error, marg_err);
    }
    checks.pass = checks.max_correlation_error <= tolerance &&
                  checks.max_marginal_error <= tolerance;
    return checks;
}

inline nlohmann::json oracle_report(const OracleChecks& checks) {
    nlohmann::json j;
    j["schema_version"] = report_schema_version;
    j["config"] = {
        {"command", "oracle"},
        {"grid_points", checks.grid_points},
    };
    j["checks"] = {
        {"max_correlation_error_vs_analytic", checks.max_correlation_error},
        {"max_marginal_error", checks.max_marginal_error},
        {"tolerance", checks.tolerance},
        {"pass", checks.pass},
    };
    return j;
}

}  // namespace bellsim
