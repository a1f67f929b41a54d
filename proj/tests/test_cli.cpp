#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "onlinecolor/cli.hpp"

using namespace onlinecolor;
using namespace onlinecolor::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("onlinecolor_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path operator/(const std::string& s) const { return path / s; }
};

void put(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Outcome {
    int code;
    std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "onlinecolor");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    for (std::string f; std::getline(is, f, ',');) out.push_back(f);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

TEST_CASE("config parsing") {
    const auto cfg = parse_config(R"({"instance": {"generator": "random_graph", "n": 50, "delta": 4, "m": 60},
                                      "algorithm": "alg1", "params": {"eps": 0.3}, "seeds": {"from": 3, "to": 5}})");
    CHECK(cfg.algorithm == Algorithm::Alg1);
    CHECK(cfg.seeds == std::vector<std::uint64_t>{3, 4, 5});
    CHECK(*cfg.overrides.eps == 0.3);
    CHECK(cfg.instance.describe() == "random_graph n=50 delta=4 m=60");

    CHECK(parse_config(R"({"seeds": 7})").seeds == std::vector<std::uint64_t>{7});
    CHECK(parse_config("{}", {}, std::string("11")).seeds == std::vector<std::uint64_t>{11});
    CHECK(parse_config(R"({"seeds": [1]})", {}, std::string("11")).seeds == std::vector<std::uint64_t>{1});
    CHECK(parse_config("{}", {"params.eps=0.4", "algorithm=alg2"}).overrides.eps == 0.4);
    CHECK(parse_config("{}", {"algorithm=alg2"}).algorithm == Algorithm::Alg2);

    const auto sw = parse_config(R"({"sweep": {"key": "params.eps", "from": 0.1, "to": 0.3, "step": 0.1}})");
    CHECK(sw.sweep->values == std::vector<double>{0.1, 0.2, 0.3});

    for (const char* bad : {R"({"seed": 1})", R"({"schema_version": 2})", R"({"instance": {"generator": "nope"}})",
                            R"({"algorithm": "magic"})", R"({"params": {"eps": "x"}})", R"({"seeds": []})",
                            R"({"sweep": {"key": "params.eps", "values": []}})", R"({"sweep": {"values": [1]}})",
                            R"({"repetitions": 0})", "not json", R"({"instance": {"generator": "random_graph"}})"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_config(bad), ConfigError);
    }
    CHECK_THROWS_AS(parse_config("{}", {}, std::string("abc")), ConfigError);
    CHECK_THROWS_AS(parse_config("{}", {"noequals"}), ConfigError);
}

TEST_CASE("results header is stable") {
    CHECK(std::string(kResultsHeader) ==
          "schema_version,run_id,seed,repetition,instance,algorithm,n,delta,m,eps,cap,total_colors,"
          "alg_palette_size,greedy_palette_size,max_marked_degree,marked_edges,failed,failure_index,failures,"
          "bad_vertices,dangerous_vertices,valid,sweep_value,bias_final");
}

TEST_CASE("greedy on the two-star instance") {
    TempDir d;
    put(d / "c.json", R"({"instance": {"generator": "two_star_bridge", "delta": 5}, "algorithm": "greedy", "seeds": [1]})");
    const auto r = invoke({"run", "--config", (d / "c.json").string(), "--out", (d / "out").string()});
    REQUIRE(r.code == kOk);
    const auto rows = lines(slurp(d / "out" / "results.csv"));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == kResultsHeader);
    const auto f = fields(rows[1]);
    REQUIRE(f.size() == 24);
    CHECK(std::stoi(f[11]) <= 9);
    CHECK(f[21] == "1");
}

TEST_CASE("fixed-seed results match the golden file") {
    TempDir d;
    put(d / "c.json", R"({"instance": {"generator": "random_graph", "n": 120, "delta": 8, "m": 400},
                          "algorithm": "alg2", "params": {"eps": 0.3, "badness_threshold": 3, "dangerous_threshold": 4},
                          "seeds": [1, 2], "repetitions": 2})");
    REQUIRE(invoke({"run", "--config", (d / "c.json").string(), "--out", (d / "a").string()}).code == kOk);
    REQUIRE(invoke({"run", "--config", (d / "c.json").string(), "--out", (d / "b").string(), "--jobs", "3"}).code == kOk);
    const auto a = slurp(d / "a" / "results.csv");
    CHECK(a == slurp(d / "b" / "results.csv"));
    CHECK(slurp(d / "a" / "summary.csv") == slurp(d / "b" / "summary.csv"));
    CHECK(a == slurp(fs::path(ONLINECOLOR_TEST_DATA) / "golden_results.csv"));
}

TEST_CASE("sweep writes one row per point and a summary") {
    TempDir d;
    put(d / "c.json", R"({"instance": {"generator": "gadget_farm", "delta": 3, "copies": 20},
                          "algorithm": "randgreedy", "seeds": {"from": 1, "to": 4},
                          "sweep": {"key": "palette_size", "values": [3, 4, 5]}})");
    REQUIRE(invoke({"sweep", "--config", (d / "c.json").string(), "--out", d.path.string()}).code == kOk);
    const auto rows = lines(slurp(d / "results.csv"));
    CHECK(rows.size() == 1 + 3 * 4);
    const auto summary = lines(slurp(d / "summary.csv"));
    REQUIRE(summary.size() == 4);
    CHECK(summary[0] == kSummaryHeader);
    // Palette 5 = 2 delta - 1 never fails.
    CHECK(fields(summary[3])[2] == "0");
    // Palette 3 fails on some gadget of the farm almost surely.
    CHECK(fields(summary[1])[2] == "1");
}

TEST_CASE("a single-point sweep reproduces run") {
    TempDir d;
    put(d / "run.json", R"({"instance": {"generator": "random_graph", "n": 60, "delta": 6, "m": 150},
                            "algorithm": "alg1", "params": {"eps": 0.25}, "seeds": [4, 5]})");
    put(d / "sweep.json", R"({"instance": {"generator": "random_graph", "n": 60, "delta": 6, "m": 150},
                              "algorithm": "alg1", "seeds": [4, 5], "sweep": {"key": "params.eps", "values": [0.25]}})");
    REQUIRE(invoke({"run", "--config", (d / "run.json").string(), "--out", (d / "r").string()}).code == kOk);
    REQUIRE(invoke({"sweep", "--config", (d / "sweep.json").string(), "--out", (d / "s").string()}).code == kOk);
    const auto r = lines(slurp(d / "r" / "results.csv")), s = lines(slurp(d / "s" / "results.csv"));
    REQUIRE(r.size() == s.size());
    for (std::size_t i = 1; i < r.size(); ++i) {
        auto fr = fields(r[i]), fs_ = fields(s[i]);
        CHECK(fs_[22] == "0.25");
        fr[22] = fs_[22] = "";
        CHECK(fr == fs_);
    }
}

TEST_CASE("diagnostics outputs") {
    TempDir d;
    put(d / "c.json", R"({"instance": {"generator": "random_graph", "n": 60, "delta": 6, "m": 150},
                          "algorithm": "alg1", "params": {"eps": 0.3}, "seeds": [1],
                          "diagnostics": {"trajectories": true, "scaling_factors": true, "tracked_count": 3,
                                          "assignments": true}})");
    REQUIRE(invoke({"run", "--config", (d / "c.json").string(), "--out", d.path.string()}).code == kOk);
    const auto tr = lines(slurp(d / "trajectories_0.csv"));
    REQUIRE(tr.size() > 3);
    CHECK(tr[0] == "t,edge_u,edge_v,Z,Y,Zbar,bad_colors");
    CHECK(fs::exists(d / "scaling_0.csv"));
    CHECK(fs::exists(d / "assignment_0.txt"));
    CHECK(fs::exists(d / "timings.csv"));
}

TEST_CASE("enumerate") {
    TempDir d;
    put(d / "c.json", R"({"instance": {"generator": "two_star_bridge", "delta": 2}, "algorithm": "randgreedy",
                          "palette_size": 2})");
    auto r = invoke({"enumerate", "--config", (d / "c.json").string(), "--out", d.path.string()});
    REQUIRE(r.code == kOk);
    CHECK(r.out.find("\"failure_probability\": 0.5") != std::string::npos);
    CHECK(fs::exists(d / "enumerate.json"));

    put(d / "e.txt", "2 1\n0 1\n");
    put(d / "a.json", R"({"instance": {"file": "E"}, "algorithm": "alg1", "params": {"eps": 0.3}})");
    r = invoke({"enumerate", "--config", (d / "a.json").string(), "--set", "instance.file=" + (d / "e.txt").string(),
             "--out", d.path.string()});
    REQUIRE(r.code == kOk);
    CHECK(r.out.find("\"marked_probability\": [\n    0.3") != std::string::npos);

    put(d / "k.json", R"({"instance": {"generator": "random_graph", "n": 10, "delta": 3, "m": 10},
                          "algorithm": "alg1", "params": {"eps": 0.3}, "seeds": [1], "enumerate": {"budget": 50}})");
    CHECK(invoke({"enumerate", "--config", (d / "k.json").string(), "--out", d.path.string()}).code == kBudgetError);
}

TEST_CASE("validate") {
    TempDir d;
    put(d / "tri.txt", "3 2\n0 1\n1 2\n0 2\n");
    put(d / "good.txt", "0 1 A:1\n1 2 A:2\n0 2 G:1\n");
    put(d / "clash.txt", "0 1 A:1\n1 2 A:1\n0 2 A:3\n");
    put(d / "partial.txt", "0 1 A:1\n1 2 A:2\n");
    put(d / "garbled.txt", "0 1 blue\n");
    const auto inst = (d / "tri.txt").string();
    CHECK(invoke({"validate", "--instance", inst, "--assignment", (d / "good.txt").string()}).code == kOk);
    const auto clash = invoke({"validate", "--instance", inst, "--assignment", (d / "clash.txt").string()});
    CHECK(clash.code == kValidityFailure);
    CHECK(clash.out.find("vertex 1") != std::string::npos);
    const auto partial = invoke({"validate", "--instance", inst, "--assignment", (d / "partial.txt").string()});
    CHECK(partial.code == kValidityFailure);
    CHECK(partial.out.find("unassigned edge 0-2") != std::string::npos);
    CHECK(invoke({"validate", "--instance", inst, "--assignment", (d / "garbled.txt").string()}).code == kIoError);
    CHECK(invoke({"validate", "--instance", inst, "--assignment", (d / "missing.txt").string()}).code == kIoError);
    CHECK(invoke({"validate", "--instance", inst}).code == kConfigError);
}

TEST_CASE("exit codes for configuration and i/o errors") {
    TempDir d;
    put(d / "bad.json", R"({"mystery": 1})");
    CHECK(invoke({"run", "--config", (d / "bad.json").string()}).code == kConfigError);
    CHECK(invoke({"run", "--config", (d / "nope.json").string()}).code == kIoError);
    CHECK(invoke({"run"}).code == kConfigError);
    CHECK(invoke({"frobnicate"}).code == kConfigError);
    // Desk-scale defaults are invalid without an eps override.
    put(d / "eps.json", R"({"instance": {"generator": "random_graph", "n": 100, "delta": 16, "m": 100},
                            "algorithm": "alg1", "seeds": [1]})");
    const auto r = invoke({"run", "--config", (d / "eps.json").string(), "--out", d.path.string()});
    CHECK(r.code == kConfigError);
    CHECK(r.err.find("eps") != std::string::npos);
    put(d / "sweep.json", R"({"seeds": [1], "sweep": {"key": "params.eps", "values": []}})");
    CHECK(invoke({"sweep", "--config", (d / "sweep.json").string()}).code == kConfigError);
    put(d / "noseed.json", R"({"instance": {"generator": "two_star_bridge", "delta": 3}})");
    CHECK(invoke({"run", "--config", (d / "noseed.json").string(), "--out", d.path.string()}).code == kConfigError);
}

TEST_CASE("bias tree sweep writes per-layer statistics") {
    TempDir d;
    put(d / "c.json", R"({"instance": {"generator": "bias_tree"}, "seeds": [1],
                          "bias_tree": {"delta": 16, "layers": 3, "pool_size": 256},
                          "sweep": {"key": "bias_tree.palette_ratio", "values": [1.5, 2.0]}})");
    REQUIRE(invoke({"sweep", "--config", (d / "c.json").string(), "--out", d.path.string()}).code == kOk);
    const auto rows = lines(slurp(d / "bias_layers.csv"));
    CHECK(rows.size() == 1 + 2 * 3);
    CHECK(rows[0] == kBiasLayersHeader);
}

TEST_CASE("assignment files round-trip") {
    ColoringState s(4, 0);
    s.assign(Edge(0, 1), ColorRef::alg(2));
    s.assign(Edge(2, 3), ColorRef::greedy(1));
    std::ostringstream os;
    write_assignment(os, s);
    CHECK(os.str() == "0 1 A:2\n2 3 G:1\n");
    std::istringstream is(os.str());
    CHECK(read_assignment(is, 4) == s);
    std::istringstream dup("0 1 A:1\n1 0 A:2\n");
    CHECK_THROWS_AS(read_assignment(dup, 4), FormatError);
}
