#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "onlinecolor/bias_tree.hpp"
#include "onlinecolor/colorers.hpp"
#include "onlinecolor/params.hpp"
#include "onlinecolor/stream.hpp"

namespace onlinecolor::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kValidityFailure = 1, kConfigError = 2, kIoError = 3, kBudgetError = 4 };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InstanceSpec {
    /// two_star_bridge | gadget_farm | random_graph | list_lb_deterministic |
    /// list_lb_randomized | bias_tree | file
    std::string generator = "random_graph";
    std::string file;
    int n = 0;
    int delta = 0;
    int m = 0;
    int copies = 1;
    bool interleave = false;
    int star_palette_size = 0;
    bool random_order = false;

    std::string describe() const;
};

struct DiagnosticsSpec {
    bool trajectories = false;
    bool scaling_factors = false;
    std::vector<Edge> tracked_edges;
    /// When no edges are listed: track the last `tracked_count` arrivals.
    int tracked_count = 0;
    std::vector<std::int32_t> colors;  // empty: all
    bool assignments = false;
};

struct SweepSpec {
    std::string key;  // dotted config path
    std::vector<double> values;
};

struct ExperimentConfig {
    InstanceSpec instance;
    Algorithm algorithm = Algorithm::Greedy;
    AdversaryMode mode = AdversaryMode::Adaptive;
    ParamOverrides overrides;
    int palette_size = 0;
    std::vector<std::uint64_t> seeds;
    int repetitions = 1;
    bool continue_after_failure = false;
    DiagnosticsSpec diagnostics;
    BiasTreeConfig bias_tree;
    std::optional<SweepSpec> sweep;
    std::int64_t enumerate_budget = 1'000'000;
    std::string assignment_file;  // validate only
    std::string out_dir = ".";
    /// Resolved JSON (after --set), used to derive sweep points.
    std::string source_json;
};

/// Parses a JSON document (after --set overrides). Throws ConfigError.
/// `env_seed` is the ONLINECOLOR_SEED fallback used when no seeds are given.
ExperimentConfig parse_config(const std::string& json_text, const std::vector<std::string>& sets = {},
                              const std::optional<std::string>& env_seed = std::nullopt);

struct ResultRow {
    int run_id = 0;
    std::uint64_t seed = 0;
    int repetition = 0;
    std::string instance;
    std::string algorithm;
    int n = 0;
    int delta = 0;
    std::int64_t m = 0;
    std::optional<double> eps;
    std::optional<double> cap;
    int total_colors = 0;
    int alg_palette_size = 0;
    int greedy_palette_size = 0;
    int max_marked_degree = 0;
    std::int64_t marked_edges = 0;
    bool failed = false;
    std::optional<std::int64_t> failure_index;
    std::int64_t failures = 0;
    int bad_vertices = 0;
    int dangerous_vertices = 0;
    bool valid = true;
    std::optional<double> sweep_value;
    std::optional<double> bias_final;
    double wall_ms = 0.0;  // written to timings.csv only
};

inline constexpr const char* kResultsHeader =
    "schema_version,run_id,seed,repetition,instance,algorithm,n,delta,m,eps,cap,total_colors,alg_palette_size,"
    "greedy_palette_size,max_marked_degree,marked_edges,failed,failure_index,failures,bad_vertices,"
    "dangerous_vertices,valid,sweep_value,bias_final";
inline constexpr const char* kSummaryHeader =
    "sweep_value,runs,failure_rate,failure_rate_ci_low,failure_rate_ci_high,mean_total_colors,"
    "total_colors_ci_low,total_colors_ci_high,mean_greedy_palette_size,mean_max_marked_degree,mean_bias_final,"
    "bias_final_ci_low,bias_final_ci_high,invalid_runs";
inline constexpr const char* kBiasLayersHeader =
    "run_id,seed,sweep_value,palette_size,layer,mean_bias,mean_signed_bias,saturated_fraction,failures,"
    "acceptance_rate";

std::string format_row(const ResultRow& r);

/// Builds the configured instance stream for one run.
std::unique_ptr<ArrivalStream> make_stream(const InstanceSpec& spec, std::uint64_t seed, int repetition);

/// Line format `u v A:3` or `u v G:2`.
void write_assignment(std::ostream& os, const ColoringState& state);
/// Throws FormatError.
ColoringState read_assignment(std::istream& is, int n);

/// Entry point shared by the executable and the tests. Returns an ExitCode.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace onlinecolor::cli
