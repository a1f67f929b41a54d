#include <cmath>
#include <sstream>

#include "doctest.h"
#include "onlinecolor/coloring.hpp"
#include "onlinecolor/params.hpp"
#include "onlinecolor/rng.hpp"

using namespace onlinecolor;

TEST_CASE("default eps and cap follow the closed forms") {
    // ln n = 1, delta = 10^32: (1e-32)^(1/16) = 1e-2.
    CHECK(default_eps(1.0, 1e32, AdversaryMode::Adaptive) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(default_cap(0.1, 1e32) == doctest::Approx(400.0 / 1e32).epsilon(1e-12));
    // Oblivious mode uses sqrt(ln n).
    CHECK(default_eps(16.0, 4.0, AdversaryMode::Oblivious) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("eps override at delta 64") {
    ParamOverrides o;
    o.eps = 0.2;
    const Params p = derive_params(2000, 64, AdversaryMode::Adaptive, o);
    CHECK(p.valid());
    CHECK(p.cap == doctest::Approx(1.5625));
    CHECK(p.alpha == doctest::Approx(0.008 / 100));
    CHECK(p.badness_threshold == doctest::Approx(2 * 560 * 0.2 * 64));
    CHECK(p.dangerous_threshold == doctest::Approx(0.008 / 100 * 64));
    CHECK(p.initial_p() == doctest::Approx(0.8 / 64));
}

TEST_CASE("desk-scale defaults are rejected") {
    const Params p = derive_params(100, 16, AdversaryMode::Adaptive);
    const double expect = 10.0 * std::pow(std::log(100.0) / 16.0, 1.0 / 16.0);
    CHECK(expect > 1.0);
    CHECK(p.eps == doctest::Approx(expect));
    CHECK_FALSE(p.valid());
    CHECK(p.invalid_reason.find("override") != std::string::npos);
    CHECK_THROWS_AS(p.require_valid(), InvalidParams);
}

TEST_CASE("parameter derivation is pure") {
    ParamOverrides o;
    o.eps = 0.35;
    CHECK(derive_params(500, 12, AdversaryMode::Oblivious, o) == derive_params(500, 12, AdversaryMode::Oblivious, o));
}

TEST_CASE("bad sizes and overrides") {
    CHECK_THROWS_AS(derive_params(1, 3, AdversaryMode::Adaptive), InvalidParams);
    CHECK_THROWS_AS(derive_params(10, 0, AdversaryMode::Adaptive), InvalidParams);
    ParamOverrides o;
    o.eps = 0.5;
    o.cap = 0.0;
    CHECK_FALSE(derive_params(10, 3, AdversaryMode::Adaptive, o).valid());
    o.cap.reset();
    o.eps = 1.0;
    CHECK_FALSE(derive_params(10, 3, AdversaryMode::Adaptive, o).valid());
    CHECK(parse_mode("oblivious") == AdversaryMode::Oblivious);
    CHECK_THROWS_AS(parse_mode("sneaky"), InvalidParams);
}

TEST_CASE("rng streams are reproducible and distinct") {
    RngHandle a(7, 0), b(7, 0), c(7, 1);
    bool differs = false;
    for (int i = 0; i < 64; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        differs |= x != c.next_u64();
    }
    CHECK(differs);
    RngHandle r(3);
    for (int i = 0; i < 1000; ++i) {
        const double u = r.uniform01();
        CHECK((u >= 0.0 && u < 1.0));
        CHECK(r.uniform_index(7) < 7u);
    }
    CHECK(RngHandle(5).fork(2).next_u64() == RngHandle(5, 2).next_u64());
}

TEST_CASE("uniform_index is close to uniform") {
    RngHandle r(11);
    std::vector<int> counts(5, 0);
    for (int i = 0; i < 50000; ++i) ++counts[r.uniform_index(5)];
    for (int c : counts) CHECK(std::abs(c - 10000) < 400);
}

TEST_CASE("color set first_absent") {
    ColorSet s;
    CHECK(s.first_absent(1) == 1);
    for (int i = 1; i <= 70; ++i) s.insert(i);
    CHECK(s.first_absent(1) == 71);
    s.erase(64);
    CHECK(s.first_absent(1) == 64);
    CHECK(s.contains(63));
    CHECK_FALSE(s.contains(64));
}

TEST_CASE("greedy first-fit") {
    ColoringState st(8, 0);
    CHECK(to_string(greedy_assign(st, Edge(0, 1))) == "G:1");
    for (int leaf = 2; leaf <= 5; ++leaf) greedy_assign(st, Edge(0, leaf));
    CHECK(st.greedy_palette_size() == 5);
    CHECK(*st.color_of(Edge(5, 0)) == ColorRef::greedy(5));
    // 6-7 touches nothing colored.
    CHECK(greedy_assign(st, Edge(6, 7)) == ColorRef::greedy(1));
    CHECK(st.is_free(Edge(6, 1), ColorRef::greedy(2)));
    CHECK_FALSE(st.is_free(Edge(6, 1), ColorRef::greedy(1)));
}

TEST_CASE("edges are canonical") {
    CHECK(Edge(5, 2) == Edge(2, 5));
    CHECK(Edge(5, 2).u == 2);
    CHECK(to_string(Edge(5, 2)) == "2-5");
    CHECK(Edge(1, 2).intersects(Edge(2, 3)));
    CHECK_FALSE(Edge(1, 2).intersects(Edge(3, 4)));
}

TEST_CASE("validate_coloring") {
    const std::vector<Edge> tri{{0, 1}, {1, 2}, {0, 2}};
    ColoringState ok(3, 3);
    ok.assign(tri[0], ColorRef::alg(1));
    ok.assign(tri[1], ColorRef::alg(2));
    ok.assign(tri[2], ColorRef::alg(3));
    CHECK(validate_coloring(tri, ok).ok());

    const std::vector<Edge> path{{0, 1}, {1, 2}};
    ColoringState bad(3, 3);
    bad.assign(path[0], ColorRef::alg(1));
    bad.assign(path[1], ColorRef::alg(1));
    auto rep = validate_coloring(path, bad);
    REQUIRE(rep.conflicts.size() == 1);
    CHECK(rep.conflicts[0].vertex == 1);
    CHECK(rep.describe().find("vertex 1") != std::string::npos);

    // Same index in different palettes is not a conflict.
    ColoringState mixed(3, 3);
    mixed.assign(path[0], ColorRef::alg(1));
    mixed.assign(path[1], ColorRef::greedy(1));
    CHECK(validate_coloring(path, mixed).ok());

    ColoringState partial(3, 3);
    partial.assign(path[0], ColorRef::alg(1));
    rep = validate_coloring(path, partial);
    REQUIRE(rep.unassigned.size() == 1);
    CHECK(rep.unassigned[0] == Edge(1, 2));
}
