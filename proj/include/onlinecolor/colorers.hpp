#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "onlinecolor/coloring.hpp"
#include "onlinecolor/params.hpp"
#include "onlinecolor/ptable.hpp"
#include "onlinecolor/rng.hpp"
#include "onlinecolor/stream.hpp"

namespace onlinecolor {

enum class Algorithm { Greedy, RandGreedy, Alg1, Alg2, ListGreedy };

std::string to_string(Algorithm a);
/// Accepts greedy | randgreedy | alg1 | alg2 | listgreedy.
Algorithm parse_algorithm(const std::string& s);

/// How an arrival was handled.
enum class Branch : std::uint8_t {
    MarkedZ,     // Z > 1: marked, no P updates
    Sampled,     // K_t drawn; outcome holds the color or kBottom
    BadColored,  // endpoint bad: lowest positive-P color, then burned
    BadMarked,   // endpoint bad, all P zero or an endpoint dangerous
    Greedy,      // plain first-fit
    Random,      // randomized greedy / list greedy choice
    Failed,      // no admissible color
};

std::string to_string(Branch b);

struct ArrivalRecord {
    Time t = 0;  // 1-based arrival index
    Edge edge;
    Branch branch = Branch::Greedy;
    std::int32_t outcome = kBottom;
    std::optional<ColorRef> color;
    double z = 0.0;
    bool u_bad = false;
    bool v_bad = false;
    /// P^{(t-1)}_{e_t,.}; only kept when tracing.
    std::vector<double> pvec;

    bool marked() const { return color && color->palette == Palette::Greedy && branch != Branch::Greedy; }
};

struct Failure {
    std::size_t edge_index = 0;  // 0-based arrival index
    std::string reason;
};

struct BadnessState {
    std::vector<int> badness;
    std::vector<int> baddeg;
};

struct Metrics {
    int alg_palette_size = 0;
    int greedy_palette_size = 0;
    int total_colors = 0;  // alg_palette_size + greedy_palette_size
    std::vector<int> marked_per_vertex;
    int max_marked_degree = 0;
    std::vector<int> badness_final;
    std::vector<int> baddeg_final;
    int bad_vertex_count = 0;
    int dangerous_vertex_count = 0;
};

struct RunResult {
    Algorithm algorithm = Algorithm::Greedy;
    int n = 0;
    int delta = 0;
    std::optional<Params> params;
    ColoringState state;
    std::vector<ArrivalRecord> records;
    std::set<Edge> marked;
    std::vector<Failure> failures;
    std::optional<BadnessState> badness;
    Metrics metrics;
    /// Final P-table; kept for Alg1/Alg2 when tracing.
    std::optional<PTable> table;

    const std::optional<Failure> failure() const {
        return failures.empty() ? std::nullopt : std::optional<Failure>(failures.front());
    }
    std::vector<Edge> arrived_edges() const;
    /// Edges that received a color.
    std::vector<Edge> colored_edges() const;
    bool has_trace() const { return table.has_value(); }
    /// Canonical text of the arrival trace: one `t u v branch outcome color`
    /// line per arrival.
    std::string trace_text() const;
    /// Canonical text of everything deterministic in the result.
    std::string serialize() const;
};

struct RunOptions {
    bool keep_trace = false;
    /// Randomized/list greedy: keep going after an uncolorable edge.
    bool continue_after_failure = false;
};

/// In-run observer, called synchronously after each arrival is committed.
struct DiagnosticsHooks {
    std::function<void(const ArrivalRecord&, const PTable&)> on_arrival;
};

/// Inverse-CDF draw over (p_1, ..., p_delta, 1 - sum) in index order with
/// the bottom outcome last. u in [0,1).
std::int32_t sample_outcome(std::span<const double> pvec, double u);

/// Stepwise Algorithm 1 / Algorithm 2 state machine. `prepare` inspects the
/// arriving edge; `commit` applies a chosen outcome. Copyable, so exact
/// enumeration can branch on every outcome.
class ProbabilisticColorer {
public:
    enum class Variant { Alg1, Alg2 };

    struct Decision {
        Edge edge;
        Branch branch = Branch::MarkedZ;
        std::vector<double> pvec;
        double z = 0.0;
        bool u_bad = false;
        bool v_bad = false;
        std::int32_t bad_color = 0;
    };

    ProbabilisticColorer(const Params& params, Variant variant, bool keep_pvecs);

    Decision prepare(const Edge& e) const;
    /// outcome is only read for Branch::Sampled.
    const ArrivalRecord& commit(const Decision& d, std::int32_t outcome);

    const Params& params() const { return params_; }
    Variant variant() const { return variant_; }
    Time time() const { return t_; }
    const PTable& table() const { return table_; }
    const ColoringState& state() const { return state_; }
    const std::vector<ArrivalRecord>& records() const { return records_; }
    const std::set<Edge>& marked() const { return marked_; }
    const BadnessState& badness() const { return bad_; }

    bool is_bad(VertexId x) const { return bad_.badness[static_cast<std::size_t>(x)] >= params_.badness_threshold; }
    bool is_dangerous(VertexId x) const {
        return bad_.baddeg[static_cast<std::size_t>(x)] >= params_.dangerous_threshold;
    }

    /// Moves the accumulated state into a RunResult.
    RunResult finish(Algorithm algorithm, bool keep_table) &&;

private:
    Params params_;
    Variant variant_;
    bool keep_pvecs_;
    Time t_ = 0;
    PTable table_;
    ColoringState state_;
    std::vector<ArrivalRecord> records_;
    std::set<Edge> marked_;
    BadnessState bad_;
};

RunResult run_greedy(ArrivalStream& stream, const RunOptions& opts = {});
RunResult run_randomized_greedy(ArrivalStream& stream, int palette_size, RngHandle& rng, const RunOptions& opts = {});
RunResult run_alg1(ArrivalStream& stream, const Params& params, RngHandle& rng, const RunOptions& opts = {},
                   const DiagnosticsHooks* diag = nullptr);
RunResult run_alg2(ArrivalStream& stream, const Params& params, RngHandle& rng, const RunOptions& opts = {},
                   const DiagnosticsHooks* diag = nullptr);
/// Arrivals carry palettes; picks uniformly among palette colors unused at
/// both endpoints.
RunResult run_list_greedy(ArrivalStream& stream, RngHandle& rng, const RunOptions& opts = {});

/// Fills result.metrics from the coloring, marks and badness counters.
void compute_metrics(RunResult& result);

}  // namespace onlinecolor
