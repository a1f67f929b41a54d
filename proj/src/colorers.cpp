#include "onlinecolor/colorers.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <sstream>


namespace onlinecolor {

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::Greedy: return "greedy";
        case Algorithm::RandGreedy: return "randgreedy";
        case Algorithm::Alg1: return "alg1";
        case Algorithm::Alg2: return "alg2";
        case Algorithm::ListGreedy: return "listgreedy";
    }
    return "?";
}

Algorithm parse_algorithm(const std::string& s) {
    for (auto a : {Algorithm::Greedy, Algorithm::RandGreedy, Algorithm::Alg1, Algorithm::Alg2, Algorithm::ListGreedy})
        if (to_string(a) == s) return a;
    throw std::invalid_argument("unknown algorithm '" + s + "'");
}

std::string to_string(Branch b) {
    switch (b) {
        case Branch::MarkedZ: return "mark_z";
        case Branch::Sampled: return "sample";
        case Branch::BadColored: return "bad_color";
        case Branch::BadMarked: return "bad_mark";
        case Branch::Greedy: return "greedy";
        case Branch::Random: return "random";
        case Branch::Failed: return "failed";
    }
    return "?";
}

std::int32_t sample_outcome(std::span<const double> pvec, double u) {
    double cumulative = 0.0;
    for (std::size_t c = 0; c < pvec.size(); ++c) {
        cumulative += pvec[c];
        if (u < cumulative) return static_cast<std::int32_t>(c + 1);
    }
    return kBottom;
}

std::vector<Edge> RunResult::arrived_edges() const {
    std::vector<Edge> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.edge);
    return out;
}

std::vector<Edge> RunResult::colored_edges() const {
    std::vector<Edge> out;
    for (const auto& r : records)
        if (r.color) out.push_back(r.edge);
    return out;
}

std::string RunResult::trace_text() const {
    std::ostringstream os;
    for (const auto& r : records) {
        os << r.t << ' ' << r.edge.u << ' ' << r.edge.v << ' ' << to_string(r.branch) << ' ' << r.outcome << ' '
           << (r.color ? to_string(*r.color) : std::string("-")) << '\n';
    }
    return os.str();
}

std::string RunResult::serialize() const {
    std::ostringstream os;
    os << "algorithm " << to_string(algorithm) << "\nn " << n << "\ndelta " << delta << '\n';
    os << trace_text();
    for (const auto& f : failures) os << "failure " << f.edge_index << ' ' << f.reason << '\n';
    os << "greedy_palette_size " << metrics.greedy_palette_size << "\ntotal_colors " << metrics.total_colors
       << "\nmax_marked_degree " << metrics.max_marked_degree << '\n';
    if (badness) {
        os << "badness";
        for (int b : badness->badness) os << ' ' << b;
        os << "\nbaddeg";
        for (int b : badness->baddeg) os << ' ' << b;
        os << '\n';
    }
    return os.str();
}

void compute_metrics(RunResult& r) {
    Metrics m;
    m.alg_palette_size = r.state.alg_palette_size();
    m.greedy_palette_size = r.state.greedy_palette_size();
    m.total_colors = m.alg_palette_size + m.greedy_palette_size;
    m.marked_per_vertex.assign(static_cast<std::size_t>(r.n), 0);
    for (const auto& e : r.marked) {
        ++m.marked_per_vertex[static_cast<std::size_t>(e.u)];
        ++m.marked_per_vertex[static_cast<std::size_t>(e.v)];
    }
    for (int x : m.marked_per_vertex) m.max_marked_degree = std::max(m.max_marked_degree, x);
    if (r.badness && r.params) {
        m.badness_final = r.badness->badness;
        m.baddeg_final = r.badness->baddeg;
        for (int b : m.badness_final) m.bad_vertex_count += b >= r.params->badness_threshold;
        for (int b : m.baddeg_final) m.dangerous_vertex_count += b >= r.params->dangerous_threshold;
    }
    r.metrics = std::move(m);
}

// ---------------------------------------------------------------------------
// Algorithm 1 / Algorithm 2

ProbabilisticColorer::ProbabilisticColorer(const Params& params, Variant variant, bool keep_pvecs)
    : params_(params.require_valid()),
      variant_(variant),
      keep_pvecs_(keep_pvecs),
      table_(params),
      state_(params.n, params.delta),
      bad_{std::vector<int>(static_cast<std::size_t>(params.n), 0), std::vector<int>(static_cast<std::size_t>(params.n), 0)} {}

ProbabilisticColorer::Decision ProbabilisticColorer::prepare(const Edge& e) const {
    Decision d;
    d.edge = e;
    d.pvec = table_.reconstruct(e);
    for (double x : d.pvec) d.z += x;

    if (variant_ == Variant::Alg2) {
        d.u_bad = is_bad(e.u);
        d.v_bad = is_bad(e.v);
        if (d.u_bad || d.v_bad) {
            auto positive = std::find_if(d.pvec.begin(), d.pvec.end(), [](double x) { return x > 0.0; });
            if (positive == d.pvec.end() || is_dangerous(e.u) || is_dangerous(e.v)) {
                d.branch = Branch::BadMarked;
            } else {
                d.branch = Branch::BadColored;
                d.bad_color = static_cast<std::int32_t>(positive - d.pvec.begin()) + 1;
            }
            return d;
        }
    }
    d.branch = d.z > 1.0 ? Branch::MarkedZ : Branch::Sampled;
    return d;
}

const ArrivalRecord& ProbabilisticColorer::commit(const Decision& d, std::int32_t outcome) {
    const Time t = ++t_;
    const Edge& e = d.edge;
    ArrivalRecord rec;
    rec.t = t;
    rec.edge = e;
    rec.branch = d.branch;
    rec.z = d.z;
    rec.u_bad = d.u_bad;
    rec.v_bad = d.v_bad;

    bool mark = false;
    switch (d.branch) {
        case Branch::MarkedZ:
        case Branch::BadMarked:
            mark = true;
            break;
        case Branch::Sampled:
            assert(outcome >= kBottom && outcome <= params_.delta);
            rec.outcome = outcome;
            table_.record_sample(t, e, d.pvec, outcome);
            if (outcome == kBottom) {
                mark = true;
            } else {
                assert(state_.is_free(e, ColorRef::alg(outcome)));
                state_.assign(e, ColorRef::alg(outcome));
                rec.color = ColorRef::alg(outcome);
            }
            break;
        case Branch::BadColored:
            rec.outcome = d.bad_color;
            assert(state_.is_free(e, ColorRef::alg(d.bad_color)));
            state_.assign(e, ColorRef::alg(d.bad_color));
            rec.color = ColorRef::alg(d.bad_color);
            table_.record_burn(t, e, d.bad_color);
            break;
        default:
            assert(false && "not a probabilistic branch");
    }
    if (mark) {
        marked_.insert(e);
        rec.color = greedy_assign(state_, e);
    }
    if (variant_ == Variant::Alg2) {
        const bool good_branch_mark = d.branch == Branch::MarkedZ || (d.branch == Branch::Sampled && outcome == kBottom);
        if (good_branch_mark) {
            ++bad_.badness[static_cast<std::size_t>(e.u)];
            ++bad_.badness[static_cast<std::size_t>(e.v)];
        }
        if (d.u_bad) ++bad_.baddeg[static_cast<std::size_t>(e.v)];
        if (d.v_bad) ++bad_.baddeg[static_cast<std::size_t>(e.u)];
    }
    if (keep_pvecs_) rec.pvec = d.pvec;
    records_.push_back(std::move(rec));
    return records_.back();
}

RunResult ProbabilisticColorer::finish(Algorithm algorithm, bool keep_table) && {
    RunResult r;
    r.algorithm = algorithm;
    r.n = params_.n;
    r.delta = params_.delta;
    r.params = params_;
    r.state = std::move(state_);
    r.records = std::move(records_);
    r.marked = std::move(marked_);
    if (variant_ == Variant::Alg2) r.badness = std::move(bad_);
    if (keep_table) r.table = std::move(table_);
    compute_metrics(r);
    return r;
}

namespace {

void check_stream_matches(const ArrivalStream& s, const Params& p) {
    if (s.n() > p.n) throw InvalidParams("stream has more vertices than params.n");
    if (s.delta() > p.delta) throw InvalidParams("stream max degree exceeds params.delta");
}

RunResult run_probabilistic(ArrivalStream& stream, const Params& params, RngHandle& rng, const RunOptions& opts,
                            const DiagnosticsHooks* diag, ProbabilisticColorer::Variant variant) {
    check_stream_matches(stream, params);
    stream.reset();
    ProbabilisticColorer eng(params, variant, opts.keep_trace);
    StreamAuditor audit(params.n, params.delta);
    PublicHistory history;
    while (auto arrival = stream.next(history)) {
        audit.admit(*arrival);
        const auto d = eng.prepare(arrival->edge);
        const std::int32_t outcome = d.branch == Branch::Sampled ? sample_outcome(d.pvec, rng.uniform01()) : kBottom;
        const auto& rec = eng.commit(d, outcome);
        history.entries.push_back({rec.edge, rec.color});
        if (diag && diag->on_arrival) diag->on_arrival(rec, eng.table());
    }
    return std::move(eng).finish(variant == ProbabilisticColorer::Variant::Alg1 ? Algorithm::Alg1 : Algorithm::Alg2,
                                 opts.keep_trace);
}

}  // namespace

RunResult run_alg1(ArrivalStream& stream, const Params& params, RngHandle& rng, const RunOptions& opts,
                   const DiagnosticsHooks* diag) {
    return run_probabilistic(stream, params, rng, opts, diag, ProbabilisticColorer::Variant::Alg1);
}

RunResult run_alg2(ArrivalStream& stream, const Params& params, RngHandle& rng, const RunOptions& opts,
                   const DiagnosticsHooks* diag) {
    return run_probabilistic(stream, params, rng, opts, diag, ProbabilisticColorer::Variant::Alg2);
}

// ---------------------------------------------------------------------------
// Greedy family

RunResult run_greedy(ArrivalStream& stream, const RunOptions&) {
    stream.reset();
    RunResult r;
    r.algorithm = Algorithm::Greedy;
    r.n = stream.n();
    r.delta = stream.delta();
    r.state = ColoringState(stream.n(), 0);
    StreamAuditor audit(stream.n(), stream.delta());
    PublicHistory history;
    Time t = 0;
    while (auto arrival = stream.next(history)) {
        audit.admit(*arrival);
        ArrivalRecord rec;
        rec.t = ++t;
        rec.edge = arrival->edge;
        rec.branch = Branch::Greedy;
        rec.color = greedy_assign(r.state, arrival->edge);
        history.entries.push_back({rec.edge, rec.color});
        r.records.push_back(std::move(rec));
    }
    compute_metrics(r);
    return r;
}

namespace {

// Shared loop for randomized greedy and list greedy: `candidates` lists the
// admissible Alg colors for an arrival.
template <class CandidateFn>
RunResult run_random_choice(ArrivalStream& stream, Algorithm algorithm, int alg_palette_size, RngHandle& rng,
                            const RunOptions& opts, CandidateFn&& candidates) {
    stream.reset();
    RunResult r;
    r.algorithm = algorithm;
    r.n = stream.n();
    r.delta = stream.delta();
    r.state = ColoringState(stream.n(), alg_palette_size);
    StreamAuditor audit(stream.n(), stream.delta());
    PublicHistory history;
    Time t = 0;
    std::vector<std::int32_t> options;
    while (auto arrival = stream.next(history)) {
        audit.admit(*arrival);
        ArrivalRecord rec;
        rec.t = ++t;
        rec.edge = arrival->edge;
        options.clear();
        candidates(*arrival, r.state, options);
        if (options.empty()) {
            rec.branch = Branch::Failed;
            r.failures.push_back({static_cast<std::size_t>(rec.t - 1), "no common free color"});
            history.entries.push_back({rec.edge, std::nullopt});
            r.records.push_back(std::move(rec));
            if (!opts.continue_after_failure) break;
            continue;
        }
        rec.branch = Branch::Random;
        rec.outcome = options[rng.uniform_index(options.size())];
        rec.color = ColorRef::alg(rec.outcome);
        r.state.assign(rec.edge, *rec.color);
        history.entries.push_back({rec.edge, rec.color});
        r.records.push_back(std::move(rec));
    }
    compute_metrics(r);
    return r;
}

}  // namespace

RunResult run_randomized_greedy(ArrivalStream& stream, int palette_size, RngHandle& rng, const RunOptions& opts) {
    if (palette_size < 1) throw std::invalid_argument("palette_size must be >= 1");
    return run_random_choice(stream, Algorithm::RandGreedy, palette_size, rng, opts,
                             [palette_size](const Arrival& a, const ColoringState& s, std::vector<std::int32_t>& out) {
                                 for (std::int32_t c = 1; c <= palette_size; ++c)
                                     if (s.is_free(a.edge, ColorRef::alg(c))) out.push_back(c);
                             });
}

RunResult run_list_greedy(ArrivalStream& stream, RngHandle& rng, const RunOptions& opts) {
    auto r = run_random_choice(stream, Algorithm::ListGreedy, 0, rng, opts,
                               [](const Arrival& a, const ColoringState& s, std::vector<std::int32_t>& out) {
                                   if (a.palette.empty()) throw StreamViolation("list arrival without a palette");
                                   for (std::int32_t c : a.palette)
                                       if (s.is_free(a.edge, ColorRef::alg(c)) &&
                                           std::find(out.begin(), out.end(), c) == out.end())
                                           out.push_back(c);
                               });
    // Opaque list colors: report how many distinct ones were used.
    std::set<std::int32_t> used;
    for (const auto& [e, c] : r.state.assignment()) used.insert(c.index);
    r.metrics.alg_palette_size = static_cast<int>(used.size());
    r.metrics.total_colors = r.metrics.alg_palette_size + r.metrics.greedy_palette_size;
    return r;
}

}  // namespace onlinecolor
