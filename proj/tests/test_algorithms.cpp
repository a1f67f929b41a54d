#include <set>

#include "doctest.h"
#include "support.hpp"

using namespace onlinecolor;
using support::params_for;

namespace {

ObliviousStream stream_of(int n, int delta, const std::vector<Edge>& edges) {
    std::vector<Arrival> a;
    for (const auto& e : edges) a.push_back({e, {}});
    return ObliviousStream(n, delta, std::move(a));
}

// Drives Algorithm 2 with chosen outcomes (only read on sample arrivals).
RunResult forced_alg2(const Params& p, const std::vector<Edge>& edges, const std::vector<std::int32_t>& outcomes) {
    ProbabilisticColorer eng(p, ProbabilisticColorer::Variant::Alg2, false);
    for (std::size_t i = 0; i < edges.size(); ++i) eng.commit(eng.prepare(edges[i]), outcomes[i]);
    return std::move(eng).finish(Algorithm::Alg2, false);
}

Params walkthrough_params(double dangerous) {
    ParamOverrides o;
    o.eps = 0.3;
    o.badness_threshold = 1;
    o.dangerous_threshold = dangerous;
    return derive_params(6, 3, AdversaryMode::Adaptive, o);
}

}  // namespace

TEST_CASE("greedy on small shapes") {
    auto star = stream_of(6, 5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
    auto r = run_greedy(star);
    for (int i = 0; i < 5; ++i) CHECK(*r.records[static_cast<std::size_t>(i)].color == ColorRef::greedy(i + 1));
    CHECK(r.metrics.total_colors == 5);

    auto single = stream_of(2, 1, {{0, 1}});
    CHECK(run_greedy(single).records[0].color == ColorRef::greedy(1));

    for (int delta = 2; delta <= 6; ++delta) {
        auto s = gen_two_star_bridge(delta);
        auto g = run_greedy(s);
        CHECK(g.metrics.total_colors <= 2 * delta - 1);
        CHECK(validate_coloring(s.edges(), g.state).ok());
    }
}

TEST_CASE("stream violations surface from every colorer") {
    auto dup = stream_of(3, 2, {{0, 1}, {1, 0}});
    CHECK_THROWS_AS(run_greedy(dup), StreamViolation);
    auto deg = stream_of(4, 2, {{0, 1}, {0, 2}, {0, 3}});
    CHECK_THROWS_AS(run_greedy(deg), StreamViolation);
    RngHandle r(1);
    CHECK_THROWS_AS(run_randomized_greedy(deg, 5, r), StreamViolation);
    CHECK_THROWS_AS(run_alg1(deg, params_for(4, 2, 0.5), r), StreamViolation);
    auto loop = stream_of(3, 2, {{1, 1}});
    CHECK_THROWS_AS(run_greedy(loop), StreamViolation);
    // Plain edges carry no palette.
    auto plain = stream_of(3, 2, {{0, 1}});
    CHECK_THROWS_AS(run_list_greedy(plain, r), StreamViolation);
}

TEST_CASE("params must cover the stream") {
    auto s = gen_two_star_bridge(3);
    RngHandle r(1);
    CHECK_THROWS_AS(run_alg1(s, params_for(4, 3, 0.3), r), InvalidParams);
    CHECK_THROWS_AS(run_alg1(s, params_for(6, 2, 0.3), r), InvalidParams);
    CHECK_THROWS_AS(run_alg1(s, derive_params(6, 3, AdversaryMode::Adaptive), r), InvalidParams);
}

TEST_CASE("randomized greedy with 2 delta - 1 colors never fails") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        RngHandle g(seed, 0), a(seed, 1);
        auto s = gen_random_graph(120, 10, 500, g);
        auto r = run_randomized_greedy(s, 19, a);
        CHECK_FALSE(r.failure());
        CHECK(validate_coloring(s.edges(), r.state).ok());
        CHECK(r.metrics.alg_palette_size == 19);
    }
}

TEST_CASE("randomized greedy gadget failure rate") {
    auto s = gen_two_star_bridge(2);
    int fails = 0;
    const int trials = 20000;
    for (int i = 0; i < trials; ++i) {
        RngHandle a(static_cast<std::uint64_t>(i), 1);
        auto r = run_randomized_greedy(s, 2, a);
        if (r.failure()) {
            ++fails;
            CHECK(r.failure()->edge_index == 2);
        }
    }
    CHECK(std::abs(fails / double(trials) - 0.5) < 0.015);
}

TEST_CASE("continue_after_failure colors the rest of a farm") {
    auto s = gen_gadget_farm(2, 60);
    RngHandle a(4, 1);
    RunOptions o;
    o.continue_after_failure = true;
    auto r = run_randomized_greedy(s, 2, a, o);
    CHECK(r.failures.size() > 10);
    CHECK(r.failures.size() < 50);
    for (const auto& f : r.failures) CHECK(f.edge_index % 3 == 2);
    CHECK(r.records.size() == s.arrivals().size());
    CHECK(r.colored_edges().size() == s.arrivals().size() - r.failures.size());
    RngHandle b(4, 1);
    auto stop = run_randomized_greedy(s, 2, b);
    CHECK(stop.failures.size() == 1);
    CHECK(stop.records.size() == stop.failures.front().edge_index + 1);
}

TEST_CASE("algorithm 1 marks a lone edge with probability eps") {
    auto s = stream_of(2, 1, {{0, 1}});
    const Params p = params_for(2, 1, 0.5);
    int marked = 0;
    for (std::uint64_t seed = 0; seed < 20000; ++seed) {
        RngHandle a(seed, 1);
        auto r = run_alg1(s, p, a);
        marked += static_cast<int>(r.marked.size());
        CHECK(r.metrics.total_colors == 1 + r.metrics.greedy_palette_size);
    }
    CHECK(std::abs(marked / 20000.0 - 0.5) < 0.015);
}

TEST_CASE("algorithm 1 output is proper") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        RngHandle g(seed, 0), a(seed, 1);
        auto s = gen_random_graph(300, 16, 2000, g);
        auto r = run_alg1(s, params_for(300, 16, 0.3), a);
        CHECK(validate_coloring(s.edges(), r.state).ok());
        CHECK(r.metrics.total_colors == 16 + r.metrics.greedy_palette_size);
        if (r.metrics.max_marked_degree > 0)
            CHECK(r.metrics.greedy_palette_size <= 2 * r.metrics.max_marked_degree - 1);
        for (const auto& rec : r.records) CHECK((rec.marked() == (r.marked.count(rec.edge) > 0)));
    }
}

TEST_CASE("degree one streams") {
    auto s = stream_of(10, 1, {{0, 1}, {2, 3}, {4, 5}, {6, 7}, {8, 9}});
    RngHandle a(3, 1);
    auto r = run_alg1(s, params_for(10, 1, 0.5), a);
    CHECK(validate_coloring(s.edges(), r.state).ok());
    CHECK(r.metrics.greedy_palette_size <= 1);
}

TEST_CASE("runs are reproducible from the seed") {
    RngHandle g(2, 0);
    auto s = gen_random_graph(80, 8, 300, g);
    const Params p = params_for(80, 8, 0.3);
    std::set<std::string> seen;
    for (std::uint64_t seed : {5, 5, 6}) {
        RngHandle a(seed, 1), b(seed, 1);
        const auto x = run_alg2(s, p, a).serialize();
        CHECK(x == run_alg2(s, p, b).serialize());
        seen.insert(x);
    }
    CHECK(seen.size() == 2);
}

TEST_CASE("algorithm 2 with default thresholds behaves as algorithm 1") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        RngHandle g(seed, 0), a(seed, 1), b(seed, 1);
        auto s = gen_random_graph(100, 12, 500, g);
        const Params p = params_for(100, 12, 0.3);
        auto r1 = run_alg1(s, p, a);
        auto r2 = run_alg2(s, p, b);
        CHECK(r1.trace_text() == r2.trace_text());
        CHECK(r2.metrics.bad_vertex_count == 0);
    }
}

TEST_CASE("algorithm 2 walkthrough: burned colors exhaust a bad edge") {
    // Two-star, delta 3: roots 0 and 3, bridge last.
    const std::vector<Edge> edges{{0, 1}, {0, 2}, {3, 4}, {3, 5}, {0, 3}};
    const auto r = forced_alg2(walkthrough_params(100), edges, {kBottom, 0, 2, 3, 0});
    CHECK(r.trace_text() ==
          "1 0 1 sample 0 G:1\n"
          "2 0 2 bad_color 1 A:1\n"
          "3 3 4 sample 2 A:2\n"
          "4 3 5 sample 3 A:3\n"
          "5 0 3 bad_mark 0 G:2\n");
    CHECK(r.badness->badness == std::vector<int>{1, 1, 0, 0, 0, 0});
    CHECK(r.badness->baddeg == std::vector<int>{0, 0, 1, 1, 0, 0});
    CHECK(r.metrics.bad_vertex_count == 2);
}

TEST_CASE("algorithm 2 walkthrough: lowest positive color at two bad roots") {
    const std::vector<Edge> edges{{0, 1}, {0, 2}, {3, 4}, {3, 5}, {0, 3}};
    const auto r = forced_alg2(walkthrough_params(100), edges, {kBottom, 0, 2, kBottom, 0});
    CHECK(r.trace_text() ==
          "1 0 1 sample 0 G:1\n"
          "2 0 2 bad_color 1 A:1\n"
          "3 3 4 sample 2 A:2\n"
          "4 3 5 sample 0 G:1\n"
          "5 0 3 bad_color 3 A:3\n");
    CHECK(r.badness->badness == std::vector<int>{1, 1, 0, 1, 0, 1});
    CHECK(r.badness->baddeg == std::vector<int>{1, 0, 1, 1, 0, 0});
}

TEST_CASE("algorithm 2 walkthrough: dangerous endpoint forces a mark") {
    const std::vector<Edge> edges{{0, 1}, {0, 2}, {1, 2}};
    const auto r = forced_alg2(walkthrough_params(1), edges, {kBottom, 0, 0});
    CHECK(r.trace_text() ==
          "1 0 1 sample 0 G:1\n"
          "2 0 2 bad_color 1 A:1\n"
          "3 1 2 bad_mark 0 G:2\n");
    CHECK(r.badness->baddeg == std::vector<int>{0, 0, 2, 0, 0, 0});
    CHECK(r.metrics.dangerous_vertex_count == 1);
}

TEST_CASE("algorithm 2 stays proper under aggressive thresholds") {
    ParamOverrides o;
    o.eps = 0.3;
    o.badness_threshold = 1;
    o.dangerous_threshold = 2;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        RngHandle g(seed, 0), a(seed, 1);
        auto s = gen_random_graph(150, 10, 600, g);
        auto r = run_alg2(s, derive_params(150, 10, AdversaryMode::Adaptive, o), a);
        CHECK(validate_coloring(s.edges(), r.state).ok());
        CHECK(r.metrics.bad_vertex_count > 0);
    }
}

TEST_CASE("list greedy respects palettes") {
    std::vector<Arrival> a;
    for (int i = 0; i < 6; ++i) a.push_back({Edge(i, i + 1), {i + 1}});
    ObliviousStream s(7, 2, a);
    RngHandle r(1);
    auto res = run_list_greedy(s, r);
    CHECK_FALSE(res.failure());
    for (int i = 0; i < 6; ++i) CHECK(*res.records[static_cast<std::size_t>(i)].color == ColorRef::alg(i + 1));
    CHECK(res.metrics.alg_palette_size == 6);
}

TEST_CASE("the adaptive list instance defeats list greedy") {
    for (int delta = 2; delta <= 4; ++delta)
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto s = gen_list_lb_deterministic(delta);
            RngHandle r(seed, 1);
            auto res = run_list_greedy(*s, r);
            REQUIRE(res.failure());
            CHECK(res.failure()->edge_index == static_cast<std::size_t>(2 * delta - 2));
        }
}
