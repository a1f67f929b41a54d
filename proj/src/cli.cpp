#include "onlinecolor/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "onlinecolor/diagnostics.hpp"
#include "onlinecolor/enumerate.hpp"
#include "onlinecolor/generators.hpp"

namespace onlinecolor::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------------------
// Config parsing

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

template <class T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + "." + key + " has the wrong type");
    }
}

void apply_set(json& root, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + assignment + "'");
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;
    json* node = &root;
    std::stringstream ss(path);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!node->contains(parts[i])) (*node)[parts[i]] = json::object();
        node = &(*node)[parts[i]];
        if (!node->is_object()) throw ConfigError("--set path '" + path + "' crosses a non-object");
    }
    (*node)[parts.back()] = value;
}

std::vector<std::uint64_t> parse_seeds(const json& j) {
    std::vector<std::uint64_t> out;
    if (j.is_array()) {
        for (const auto& s : j) {
            if (!s.is_number_integer() || s.get<std::int64_t>() < 0) throw ConfigError("seeds must be non-negative integers");
            out.push_back(s.get<std::uint64_t>());
        }
    } else if (j.is_object()) {
        check_keys(j, "seeds", {"from", "to"});
        const auto from = get_or<std::int64_t>(j, "from", 0, "seeds");
        const auto to = get_or<std::int64_t>(j, "to", -1, "seeds");
        if (from < 0) throw ConfigError("seeds.from must be non-negative");
        for (auto s = from; s <= to; ++s) out.push_back(static_cast<std::uint64_t>(s));
    } else if (j.is_number_integer()) {
        out.push_back(j.get<std::uint64_t>());
    } else {
        throw ConfigError("seeds must be a list, a {from,to} range or an integer");
    }
    if (out.empty()) throw ConfigError("seeds are empty");
    return out;
}

std::vector<double> parse_axis(const json& j) {
    std::vector<double> out;
    if (j.contains("values")) {
        if (!j.at("values").is_array()) throw ConfigError("sweep.values must be a list");
        for (const auto& v : j.at("values")) {
            if (!v.is_number()) throw ConfigError("sweep.values must be numbers");
            out.push_back(v.get<double>());
        }
    } else if (j.contains("from")) {
        const double from = get_or<double>(j, "from", 0.0, "sweep");
        const double to = get_or<double>(j, "to", from, "sweep");
        const double step = get_or<double>(j, "step", 1.0, "sweep");
        if (!(step > 0)) throw ConfigError("sweep.step must be positive");
        const auto count = static_cast<std::int64_t>(std::floor((to - from) / step + 1e-9)) + 1;
        for (std::int64_t i = 0; i < count; ++i) out.push_back(std::round((from + static_cast<double>(i) * step) * 1e9) / 1e9);
    }
    if (out.empty()) throw ConfigError("sweep axis is empty");
    return out;
}

const char* const kGenerators[] = {"two_star_bridge", "gadget_farm", "random_graph", "list_lb_deterministic",
                                   "list_lb_randomized", "bias_tree", "file"};

InstanceSpec parse_instance(const json& j) {
    check_keys(j, "instance",
               {"generator", "file", "n", "delta", "m", "copies", "interleave", "star_palette_size", "random_order"});
    InstanceSpec s;
    s.file = get_or<std::string>(j, "file", "", "instance");
    s.generator = get_or<std::string>(j, "generator", s.file.empty() ? "" : "file", "instance");
    if (std::none_of(std::begin(kGenerators), std::end(kGenerators), [&](const char* g) { return s.generator == g; }))
        throw ConfigError("unknown instance generator '" + s.generator + "'");
    s.n = get_or<int>(j, "n", 0, "instance");
    s.delta = get_or<int>(j, "delta", 0, "instance");
    s.m = get_or<int>(j, "m", 0, "instance");
    s.copies = get_or<int>(j, "copies", 1, "instance");
    s.interleave = get_or<bool>(j, "interleave", false, "instance");
    s.star_palette_size = get_or<int>(j, "star_palette_size", 0, "instance");
    s.random_order = get_or<bool>(j, "random_order", false, "instance");
    if (s.generator == "file" && s.file.empty()) throw ConfigError("instance.file is required for file instances");
    if (s.generator != "file" && s.generator != "bias_tree" && s.delta < 1)
        throw ConfigError("instance.delta is required");
    if (s.generator == "random_graph" && s.n < 1) throw ConfigError("instance.n is required for random_graph");
    return s;
}

ExperimentConfig parse_json(const json& root, const std::optional<std::string>& env_seed) {
    check_keys(root, "config",
               {"schema_version", "instance", "algorithm", "mode", "params", "palette_size", "seeds", "repetitions",
                "continue_after_failure", "diagnostics", "bias_tree", "sweep", "enumerate", "assignment", "out"});
    const int version = get_or<int>(root, "schema_version", kSchemaVersion, "config");
    if (version != kSchemaVersion)
        throw ConfigError("unsupported schema_version " + std::to_string(version) + " (expected " +
                          std::to_string(kSchemaVersion) + ")");
    ExperimentConfig cfg;
    cfg.source_json = root.dump();
    if (root.contains("instance")) cfg.instance = parse_instance(root.at("instance"));
    try {
        cfg.algorithm = parse_algorithm(get_or<std::string>(root, "algorithm", "greedy", "config"));
        cfg.mode = parse_mode(get_or<std::string>(root, "mode", "adaptive", "config"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (root.contains("params")) {
        const auto& p = root.at("params");
        check_keys(p, "params", {"eps", "cap", "alpha", "badness_threshold", "dangerous_threshold"});
        auto opt = [&](const char* k) -> std::optional<double> {
            if (!p.contains(k)) return std::nullopt;
            if (!p.at(k).is_number()) throw ConfigError(std::string("params.") + k + " must be a number");
            return p.at(k).get<double>();
        };
        cfg.overrides = {opt("eps"), opt("cap"), opt("alpha"), opt("badness_threshold"), opt("dangerous_threshold")};
    }
    cfg.palette_size = get_or<int>(root, "palette_size", 0, "config");
    if (root.contains("seeds")) {
        cfg.seeds = parse_seeds(root.at("seeds"));
    } else if (env_seed) {
        try {
            cfg.seeds = {std::stoull(*env_seed)};
        } catch (const std::exception&) {
            throw ConfigError("ONLINECOLOR_SEED is not an integer: '" + *env_seed + "'");
        }
    }
    cfg.repetitions = get_or<int>(root, "repetitions", 1, "config");
    if (cfg.repetitions < 1) throw ConfigError("repetitions must be >= 1");
    cfg.continue_after_failure = get_or<bool>(root, "continue_after_failure", false, "config");
    if (root.contains("diagnostics")) {
        const auto& d = root.at("diagnostics");
        check_keys(d, "diagnostics",
                   {"trajectories", "scaling_factors", "tracked_edges", "tracked_count", "colors", "assignments"});
        cfg.diagnostics.trajectories = get_or<bool>(d, "trajectories", false, "diagnostics");
        cfg.diagnostics.scaling_factors = get_or<bool>(d, "scaling_factors", false, "diagnostics");
        cfg.diagnostics.tracked_count = get_or<int>(d, "tracked_count", 0, "diagnostics");
        cfg.diagnostics.assignments = get_or<bool>(d, "assignments", false, "diagnostics");
        cfg.diagnostics.colors = get_or<std::vector<std::int32_t>>(d, "colors", {}, "diagnostics");
        for (const auto& pair : get_or<std::vector<std::vector<int>>>(d, "tracked_edges", {}, "diagnostics")) {
            if (pair.size() != 2 || pair[0] == pair[1]) throw ConfigError("tracked_edges entries must be [u, v] pairs");
            cfg.diagnostics.tracked_edges.emplace_back(pair[0], pair[1]);
        }
    }
    if (root.contains("bias_tree")) {
        const auto& b = root.at("bias_tree");
        check_keys(b, "bias_tree", {"delta", "palette_ratio", "layers", "pool_size", "max_attempts_factor"});
        cfg.bias_tree.delta = get_or<int>(b, "delta", cfg.bias_tree.delta, "bias_tree");
        cfg.bias_tree.palette_ratio = get_or<double>(b, "palette_ratio", cfg.bias_tree.palette_ratio, "bias_tree");
        cfg.bias_tree.layers = get_or<int>(b, "layers", cfg.bias_tree.layers, "bias_tree");
        cfg.bias_tree.pool_size = get_or<int>(b, "pool_size", cfg.bias_tree.pool_size, "bias_tree");
        cfg.bias_tree.max_attempts_factor =
            get_or<int>(b, "max_attempts_factor", cfg.bias_tree.max_attempts_factor, "bias_tree");
    }
    if (root.contains("sweep")) {
        const auto& s = root.at("sweep");
        check_keys(s, "sweep", {"key", "values", "from", "to", "step"});
        SweepSpec sw;
        sw.key = get_or<std::string>(s, "key", "", "sweep");
        if (sw.key.empty()) throw ConfigError("sweep.key is required");
        sw.values = parse_axis(s);
        cfg.sweep = std::move(sw);
    }
    if (root.contains("enumerate")) {
        check_keys(root.at("enumerate"), "enumerate", {"budget"});
        cfg.enumerate_budget = get_or<std::int64_t>(root.at("enumerate"), "budget", cfg.enumerate_budget, "enumerate");
    }
    cfg.assignment_file = get_or<std::string>(root, "assignment", "", "config");
    cfg.out_dir = get_or<std::string>(root, "out", ".", "config");
    return cfg;
}

json parse_text(const std::string& text) {
    json root = json::parse(text, nullptr, false, true);
    if (root.is_discarded()) throw ConfigError("config is not valid JSON");
    return root;
}

// ---------------------------------------------------------------------------
// CSV helpers

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::string opt_real(const std::optional<double>& x) { return x ? format_real(*x) : std::string(); }

struct MeanCi {
    double mean = 0.0, low = 0.0, high = 0.0;
};

MeanCi mean_ci(const std::vector<double>& xs) {
    MeanCi r;
    if (xs.empty()) return r;
    const double k = static_cast<double>(xs.size());
    for (double x : xs) r.mean += x;
    r.mean /= k;
    double var = 0.0;
    for (double x : xs) var += (x - r.mean) * (x - r.mean);
    const double sd = xs.size() > 1 ? std::sqrt(var / (k - 1.0)) : 0.0;
    const double half = 1.96 * sd / std::sqrt(k);
    r.low = r.mean - half;
    r.high = r.mean + half;
    return r;
}

// ---------------------------------------------------------------------------
// Runs

struct RunOutput {
    ResultRow row;
    std::vector<LayerStats> layers;
    int bias_palette = 0;
    std::string trajectories_csv;
    std::string scaling_csv;
    std::string assignment_txt;
    std::string validation_message;
    std::exception_ptr error;
};

std::vector<Edge> tracked_edges(const DiagnosticsSpec& d, const RunResult& r) {
    if (!d.tracked_edges.empty()) return d.tracked_edges;
    std::vector<Edge> out;
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(std::max(d.tracked_count, 0)), r.records.size());
    for (std::size_t i = r.records.size() - k; i < r.records.size(); ++i) out.push_back(r.records[i].edge);
    return out;
}

RunOutput execute_run(const ExperimentConfig& cfg, std::uint64_t seed, int rep, int run_id,
                      std::optional<double> sweep_value) {
    RunOutput out;
    ResultRow& row = out.row;
    row.run_id = run_id;
    row.seed = seed;
    row.repetition = rep;
    row.sweep_value = sweep_value;
    row.algorithm = to_string(cfg.algorithm);
    const auto start = std::chrono::steady_clock::now();

    if (cfg.instance.generator == "bias_tree") {
        BiasTreeConfig bt = cfg.bias_tree;
        bt.seed = rep == 0 ? seed : RngHandle(seed, static_cast<std::uint64_t>(rep)).next_u64();
        const auto report = run_bias_tree(bt);
        std::ostringstream desc;
        desc << "bias_tree delta=" << bt.delta << " ratio=" << format_real(bt.palette_ratio) << " layers=" << bt.layers
             << " pool=" << bt.pool_size;
        row.instance = desc.str();
        row.algorithm = to_string(Algorithm::RandGreedy);
        row.delta = bt.delta;
        row.total_colors = row.alg_palette_size = report.palette_size;
        for (const auto& l : report.layers) row.failures += l.failures;
        row.failed = row.failures > 0;
        row.bias_final = report.layers.back().mean_bias;
        out.layers = report.layers;
        out.bias_palette = report.palette_size;
    } else {
        auto stream = make_stream(cfg.instance, seed, rep);
        row.instance = cfg.instance.describe();
        row.n = stream->n();
        row.delta = stream->delta();
        RngHandle rng(seed, 2 * static_cast<std::uint64_t>(rep) + 1);
        RunOptions opts;
        opts.keep_trace = cfg.diagnostics.trajectories || cfg.diagnostics.scaling_factors;
        opts.continue_after_failure = cfg.continue_after_failure;
        RunResult result;
        switch (cfg.algorithm) {
            case Algorithm::Greedy: result = run_greedy(*stream, opts); break;
            case Algorithm::RandGreedy: {
                const int palette = cfg.palette_size > 0 ? cfg.palette_size : 2 * stream->delta() - 1;
                result = run_randomized_greedy(*stream, palette, rng, opts);
                break;
            }
            case Algorithm::ListGreedy: result = run_list_greedy(*stream, rng, opts); break;
            case Algorithm::Alg1:
            case Algorithm::Alg2: {
                const auto params = derive_params(std::max(stream->n(), 2), stream->delta(), cfg.mode, cfg.overrides);
                if (!params.valid()) throw ConfigError("invalid parameters: " + params.invalid_reason);
                row.eps = params.eps;
                row.cap = params.cap;
                result = cfg.algorithm == Algorithm::Alg1 ? run_alg1(*stream, params, rng, opts)
                                                           : run_alg2(*stream, params, rng, opts);
                break;
            }
        }
        const auto colored = result.colored_edges();
        const auto report = validate_coloring(colored, result.state);
        row.valid = report.ok();
        if (!row.valid) out.validation_message = report.describe();
        row.m = static_cast<std::int64_t>(result.records.size());
        row.total_colors = result.metrics.total_colors;
        row.alg_palette_size = result.metrics.alg_palette_size;
        row.greedy_palette_size = result.metrics.greedy_palette_size;
        row.max_marked_degree = result.metrics.max_marked_degree;
        row.marked_edges = static_cast<std::int64_t>(result.marked.size());
        row.failures = static_cast<std::int64_t>(result.failures.size());
        row.failed = !result.failures.empty();
        if (row.failed) row.failure_index = static_cast<std::int64_t>(result.failures.front().edge_index);
        row.bad_vertices = result.metrics.bad_vertex_count;
        row.dangerous_vertices = result.metrics.dangerous_vertex_count;

        if (result.has_trace() && cfg.diagnostics.trajectories) {
            std::vector<Trajectory> trs;
            for (const auto& f : tracked_edges(cfg.diagnostics, result))
                trs.push_back(compute_trajectory(result, f, cfg.diagnostics.colors));
            std::ostringstream os;
            write_trajectory_csv(os, trs);
            out.trajectories_csv = os.str();
        }
        if (result.has_trace() && cfg.diagnostics.scaling_factors) {
            std::ostringstream os;
            os << "edge_u,edge_v,t_e,color,S,Q_u,Q_v,identity_error,p_bound_excess\n";
            for (const auto& e : tracked_edges(cfg.diagnostics, result)) {
                const auto sf = compute_scaling_factors(result, e);
                const double excess = sf.max_p_bound_excess();
                for (std::size_t c = 0; c < sf.s.size(); ++c)
                    os << e.u << ',' << e.v << ',' << sf.t_e << ',' << c + 1 << ',' << format_real(sf.s[c]) << ','
                       << format_real(sf.q_u[c]) << ',' << format_real(sf.q_v[c]) << ','
                       << format_real(std::abs(sf.s[c] - (1.0 - sf.q_u[c]) * (1.0 - sf.q_v[c]))) << ','
                       << format_real(excess) << '\n';
            }
            out.scaling_csv = os.str();
        }
        if (cfg.diagnostics.assignments) {
            std::ostringstream os;
            write_assignment(os, result.state);
            out.assignment_txt = os.str();
        }
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

struct Job {
    const ExperimentConfig* cfg;
    std::uint64_t seed;
    int rep;
    std::optional<double> sweep_value;
};

std::vector<RunOutput> execute_jobs(const std::vector<Job>& jobs, int threads) {
    std::vector<RunOutput> outputs(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
            try {
                outputs[i] = execute_run(*jobs[i].cfg, jobs[i].seed, jobs[i].rep, static_cast<int>(i),
                                         jobs[i].sweep_value);
            } catch (...) {
                outputs[i].error = std::current_exception();
            }
        }
    };
    const auto n = static_cast<std::size_t>(std::clamp(threads, 1, 256));
    std::vector<std::thread> pool;
    for (std::size_t k = 1; k < std::min(n, jobs.size()); ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& o : outputs)
        if (o.error) std::rethrow_exception(o.error);
    return outputs;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write " + path.string());
    os << content;
    if (!os) throw IoError("failed writing " + path.string());
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

int write_outputs(const std::vector<RunOutput>& outputs, const fs::path& dir, std::ostream& out, std::ostream& err) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

    std::ostringstream results, timings, layers;
    results << kResultsHeader << '\n';
    timings << "run_id,wall_ms\n";
    bool any_layers = false;
    int invalid = 0;
    for (const auto& o : outputs) {
        results << format_row(o.row) << '\n';
        timings << o.row.run_id << ',' << format_real(o.row.wall_ms) << '\n';
        if (!o.row.valid) {
            ++invalid;
            err << "run " << o.row.run_id << " (seed " << o.row.seed << ") produced an invalid coloring:\n"
                << o.validation_message;
        }
        for (const auto& l : o.layers) {
            any_layers = true;
            layers << o.row.run_id << ',' << o.row.seed << ',' << opt_real(o.row.sweep_value) << ',' << o.bias_palette
                   << ',' << l.layer << ',' << format_real(l.mean_bias) << ',' << format_real(l.mean_signed_bias)
                   << ',' << format_real(l.saturated_fraction) << ',' << l.failures << ','
                   << format_real(l.acceptance_rate) << '\n';
        }
        const std::string id = std::to_string(o.row.run_id);
        if (!o.trajectories_csv.empty()) write_file(dir / ("trajectories_" + id + ".csv"), o.trajectories_csv);
        if (!o.scaling_csv.empty()) write_file(dir / ("scaling_" + id + ".csv"), o.scaling_csv);
        if (!o.assignment_txt.empty()) write_file(dir / ("assignment_" + id + ".txt"), o.assignment_txt);
    }
    write_file(dir / "results.csv", results.str());
    write_file(dir / "timings.csv", timings.str());
    if (any_layers) write_file(dir / "bias_layers.csv", std::string(kBiasLayersHeader) + "\n" + layers.str());

    // Groups in order of first appearance.
    std::vector<std::optional<double>> keys;
    std::map<std::string, std::vector<const ResultRow*>> groups;
    for (const auto& o : outputs) {
        const auto key = opt_real(o.row.sweep_value);
        if (!groups.count(key)) keys.push_back(o.row.sweep_value);
        groups[key].push_back(&o.row);
    }
    std::ostringstream summary;
    summary << kSummaryHeader << '\n';
    for (const auto& key : keys) {
        const auto& rows = groups[opt_real(key)];
        std::vector<double> colors, greedy, marked, bias;
        double fails = 0;
        int bad = 0;
        for (const auto* r : rows) {
            colors.push_back(r->total_colors);
            greedy.push_back(r->greedy_palette_size);
            marked.push_back(r->max_marked_degree);
            if (r->bias_final) bias.push_back(*r->bias_final);
            fails += r->failed ? 1.0 : 0.0;
            bad += r->valid ? 0 : 1;
        }
        const double k = static_cast<double>(rows.size());
        const double rate = fails / k;
        const double half = 1.96 * std::sqrt(rate * (1.0 - rate) / k);
        const auto c = mean_ci(colors);
        const auto b = mean_ci(bias);
        summary << opt_real(key) << ',' << rows.size() << ',' << format_real(rate) << ','
                << format_real(std::max(0.0, rate - half)) << ',' << format_real(std::min(1.0, rate + half)) << ','
                << format_real(c.mean) << ',' << format_real(c.low) << ',' << format_real(c.high) << ','
                << format_real(mean_ci(greedy).mean) << ',' << format_real(mean_ci(marked).mean) << ','
                << (bias.empty() ? "" : format_real(b.mean)) << ',' << (bias.empty() ? "" : format_real(b.low)) << ','
                << (bias.empty() ? "" : format_real(b.high)) << ',' << bad << '\n';
    }
    write_file(dir / "summary.csv", summary.str());
    out << "wrote " << outputs.size() << " run(s) to " << (dir / "results.csv").string() << '\n';
    return invalid > 0 ? kValidityFailure : kOk;
}

std::vector<Job> jobs_for(const ExperimentConfig& cfg, std::optional<double> sweep_value) {
    if (cfg.seeds.empty()) throw ConfigError("no seeds configured (set seeds or ONLINECOLOR_SEED)");
    std::vector<Job> jobs;
    for (auto seed : cfg.seeds)
        for (int rep = 0; rep < cfg.repetitions; ++rep) jobs.push_back({&cfg, seed, rep, sweep_value});
    return jobs;
}

int cmd_run(const ExperimentConfig& cfg, int threads, std::ostream& out, std::ostream& err) {
    if (cfg.sweep) throw ConfigError("config has a sweep section; use the sweep command");
    return write_outputs(execute_jobs(jobs_for(cfg, std::nullopt), threads), cfg.out_dir, out, err);
}

int cmd_sweep(const ExperimentConfig& cfg, const std::optional<std::string>& env_seed, int threads,
              std::ostream& out, std::ostream& err) {
    if (!cfg.sweep) throw ConfigError("sweep command needs a sweep section");
    std::vector<ExperimentConfig> points;
    points.reserve(cfg.sweep->values.size());
    for (double v : cfg.sweep->values) {
        json root = parse_text(cfg.source_json);
        root.erase("sweep");
        apply_set(root, cfg.sweep->key + "=" + format_real(v));
        points.push_back(parse_json(root, env_seed));
        points.back().out_dir = cfg.out_dir;
    }
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto js = jobs_for(points[i], cfg.sweep->values[i]);
        jobs.insert(jobs.end(), js.begin(), js.end());
    }
    return write_outputs(execute_jobs(jobs, threads), cfg.out_dir, out, err);
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

int cmd_enumerate(const ExperimentConfig& cfg, std::ostream& out) {
    const std::uint64_t seed = cfg.seeds.empty() ? 0 : cfg.seeds.front();
    auto stream = make_stream(cfg.instance, seed, 0);
    auto* oblivious = dynamic_cast<ObliviousStream*>(stream.get());
    if (oblivious == nullptr) throw ConfigError("enumeration needs an oblivious instance");
    const Instance inst = to_instance(*oblivious);
    EnumerateOptions opts;
    opts.budget = cfg.enumerate_budget;
    opts.palette_size = cfg.palette_size > 0 ? cfg.palette_size : 2 * inst.delta - 1;
    std::optional<Params> params;
    json report;
    if (cfg.algorithm == Algorithm::Alg1 || cfg.algorithm == Algorithm::Alg2) {
        params = derive_params(std::max(inst.n, 2), inst.delta, cfg.mode, cfg.overrides);
        if (!params->valid()) throw ConfigError("invalid parameters: " + params->invalid_reason);
        report["eps"] = params->eps;
        report["cap"] = params->cap;
    } else if (cfg.algorithm == Algorithm::RandGreedy) {
        report["palette_size"] = opts.palette_size;
    }
    const auto r = enumerate_exact(inst, cfg.algorithm, params ? &*params : nullptr, opts);
    report["algorithm"] = to_string(cfg.algorithm);
    report["instance"] = cfg.instance.describe();
    report["n"] = inst.n;
    report["delta"] = inst.delta;
    report["edges"] = inst.arrivals.size();
    report["nodes"] = r.nodes;
    report["leaves"] = r.leaves;
    report["probability_sum"] = r.probability_sum;
    report["failure_probability"] = r.failure_probability;
    report["marked_probability"] = r.marked_probability;
    if (params) {
        report["max_z_drift"] = finite_or_null(r.max_z_drift);
        report["max_abs_y_drift"] = r.max_abs_y_drift;
        report["max_abs_z_step"] = r.max_abs_z_step;
        report["max_abs_y_step"] = r.max_abs_y_step;
        report["max_decomposition_error"] = r.max_decomposition_error;
        report["max_q_drift"] = finite_or_null(r.max_q_drift);
        report["max_abs_dq_step"] = r.max_abs_dq_step;
    }
    if (!r.distribution_truncated) report["distribution"] = r.distribution;
    const std::string text = report.dump(2) + "\n";
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + cfg.out_dir);
    write_file(fs::path(cfg.out_dir) / "enumerate.json", text);
    out << text;
    return kOk;
}

int cmd_validate(const ExperimentConfig& cfg, std::ostream& out) {
    if (cfg.instance.file.empty()) throw ConfigError("validate needs an instance file");
    if (cfg.assignment_file.empty()) throw ConfigError("validate needs an assignment file");
    Instance inst;
    ColoringState state;
    try {
        inst = load_instance(cfg.instance.file);
        std::istringstream is(read_file(cfg.assignment_file));
        state = read_assignment(is, inst.n);
    } catch (const FormatError& e) {
        throw IoError(e.what());
    } catch (const std::ios_base::failure& e) {
        throw IoError(e.what());
    }
    std::vector<Edge> edges;
    for (const auto& a : inst.arrivals) edges.push_back(a.edge);
    const auto report = validate_coloring(edges, state);
    if (report.ok()) {
        out << "valid: " << edges.size() << " edges, no conflicts\n";
        return kOk;
    }
    out << report.describe();
    return kValidityFailure;
}

}  // namespace

std::string InstanceSpec::describe() const {
    std::ostringstream os;
    os << generator;
    if (generator == "file") {
        os << ' ' << file;
    } else {
        if (n > 0) os << " n=" << n;
        os << " delta=" << delta;
        if (generator == "random_graph") os << " m=" << m;
        if (generator == "gadget_farm" || generator == "list_lb_randomized") os << " copies=" << copies;
        if (interleave) os << " interleave";
        if (star_palette_size > 0) os << " star_palette=" << star_palette_size;
    }
    if (random_order) os << " random_order";
    return os.str();
}

ExperimentConfig parse_config(const std::string& json_text, const std::vector<std::string>& sets,
                              const std::optional<std::string>& env_seed) {
    json root = parse_text(json_text);
    for (const auto& s : sets) apply_set(root, s);
    return parse_json(root, env_seed);
}

std::string format_row(const ResultRow& r) {
    std::ostringstream os;
    os << kSchemaVersion << ',' << r.run_id << ',' << r.seed << ',' << r.repetition << ',' << csv_field(r.instance)
       << ',' << r.algorithm << ',' << r.n << ',' << r.delta << ',' << r.m << ',' << opt_real(r.eps) << ','
       << opt_real(r.cap) << ',' << r.total_colors << ',' << r.alg_palette_size << ',' << r.greedy_palette_size << ','
       << r.max_marked_degree << ',' << r.marked_edges << ',' << (r.failed ? 1 : 0) << ','
       << (r.failure_index ? std::to_string(*r.failure_index) : std::string()) << ',' << r.failures << ','
       << r.bad_vertices << ',' << r.dangerous_vertices << ',' << (r.valid ? 1 : 0) << ',' << opt_real(r.sweep_value)
       << ',' << opt_real(r.bias_final);
    return os.str();
}

std::unique_ptr<ArrivalStream> make_stream(const InstanceSpec& spec, std::uint64_t seed, int repetition) {
    RngHandle rng(seed, 2 * static_cast<std::uint64_t>(repetition));
    std::unique_ptr<ArrivalStream> s;
    const auto& g = spec.generator;
    try {
        if (g == "two_star_bridge") {
            s = std::make_unique<ObliviousStream>(gen_two_star_bridge(spec.delta));
        } else if (g == "gadget_farm") {
            s = std::make_unique<ObliviousStream>(gen_gadget_farm(spec.delta, spec.copies, spec.interleave));
        } else if (g == "random_graph") {
            s = std::make_unique<ObliviousStream>(gen_random_graph(spec.n, spec.delta, spec.m, rng));
        } else if (g == "list_lb_deterministic") {
            s = gen_list_lb_deterministic(spec.delta);
        } else if (g == "list_lb_randomized") {
            s = std::make_unique<ObliviousStream>(
                gen_list_lb_randomized(spec.delta, spec.copies, rng, spec.star_palette_size));
        } else if (g == "file") {
            try {
                s = std::make_unique<ObliviousStream>(load_instance(spec.file).stream());
            } catch (const FormatError& e) {
                throw IoError(e.what());
            } catch (const std::ios_base::failure& e) {
                throw IoError(e.what());
            }
        } else {
            throw ConfigError("generator '" + g + "' does not produce an arrival stream");
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    } catch (const GenerationFailure& e) {
        throw ConfigError(e.what());
    }
    if (spec.random_order) {
        auto* ob = dynamic_cast<ObliviousStream*>(s.get());
        if (ob == nullptr) throw ConfigError("random_order needs an oblivious instance");
        RngHandle order = rng.fork(1);
        s = std::make_unique<ObliviousStream>(wrap_random_order(*ob, order));
    }
    return s;
}

void write_assignment(std::ostream& os, const ColoringState& state) {
    for (const auto& [e, c] : state.assignment()) os << e.u << ' ' << e.v << ' ' << to_string(c) << '\n';
}

ColoringState read_assignment(std::istream& is, int n) {
    ColoringState state(n, 0);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        long long u = 0, v = 0;
        std::string color;
        std::string extra;
        if (!(ls >> u >> v >> color) || (ls >> extra))
            throw FormatError("assignment line " + std::to_string(lineno) + ": expected 'u v A:c' or 'u v G:c'");
        if (u < 0 || v < 0 || u >= n || v >= n || u == v)
            throw FormatError("assignment line " + std::to_string(lineno) + ": bad edge");
        if (color.size() < 3 || (color[0] != 'A' && color[0] != 'G') || color[1] != ':')
            throw FormatError("assignment line " + std::to_string(lineno) + ": bad color '" + color + "'");
        int idx = 0;
        try {
            std::size_t used = 0;
            idx = std::stoi(color.substr(2), &used);
            if (used != color.size() - 2 || idx < 1) throw std::invalid_argument("index");
        } catch (const std::exception&) {
            throw FormatError("assignment line " + std::to_string(lineno) + ": bad color '" + color + "'");
        }
        const Edge e(static_cast<VertexId>(u), static_cast<VertexId>(v));
        if (state.color_of(e)) throw FormatError("assignment line " + std::to_string(lineno) + ": duplicate edge");
        state.assign(e, color[0] == 'A' ? ColorRef::alg(idx) : ColorRef::greedy(idx));
    }
    return state;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Online edge-coloring experiment runner"};
    app.require_subcommand(1);
    std::string config_path, out_dir, instance_path, assignment_path;
    std::vector<std::string> sets;
    int jobs = 1;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON experiment config");
        sub->add_option("--set", sets, "Override a config field: key.path=value")->allow_extra_args(false);
        sub->add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1, 256));
        sub->add_option("--out", out_dir, "Output directory");
    };
    auto* run = app.add_subcommand("run", "Run seeds x repetitions of one configuration");
    auto* sweep = app.add_subcommand("sweep", "Run one configuration per value of a swept field");
    auto* enumerate = app.add_subcommand("enumerate", "Exact enumeration of a small instance");
    auto* validate = app.add_subcommand("validate", "Check an assignment file against an instance");
    for (auto* sub : {run, sweep, enumerate, validate}) add_common(sub);
    validate->add_option("--instance", instance_path, "Instance file");
    validate->add_option("--assignment", assignment_path, "Assignment file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    const char* env = std::getenv("ONLINECOLOR_SEED");
    const std::optional<std::string> env_seed = env ? std::optional<std::string>(env) : std::nullopt;
    try {
        std::string text = "{}";
        if (!config_path.empty()) {
            text = read_file(config_path);
        } else if (!validate->parsed()) {
            throw ConfigError("--config is required");
        }
        ExperimentConfig cfg = parse_config(text, sets, env_seed);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (run->parsed()) return cmd_run(cfg, jobs, out, err);
        if (sweep->parsed()) return cmd_sweep(cfg, env_seed, jobs, out, err);
        if (enumerate->parsed()) return cmd_enumerate(cfg, out);
        if (!instance_path.empty()) {
            cfg.instance.generator = "file";
            cfg.instance.file = instance_path;
        }
        if (!assignment_path.empty()) cfg.assignment_file = assignment_path;
        return cmd_validate(cfg, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const InvalidParams& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kIoError;
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << '\n';
        return kBudgetError;
    } catch (const StreamViolation& e) {
        err << "stream violation: " << e.what() << '\n';
        return kValidityFailure;
    } catch (const PoolExhaustion& e) {
        err << "bias tree: " << e.what() << '\n';
        return kValidityFailure;
    }
}

}  // namespace onlinecolor::cli
