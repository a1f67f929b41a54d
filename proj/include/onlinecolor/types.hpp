#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace onlinecolor {

using VertexId = std::int32_t;
using Time = std::int64_t;

/// Undirected edge, stored with u < v.
struct Edge {
    VertexId u = 0;
    VertexId v = 0;

    Edge() = default;
    Edge(VertexId a, VertexId b) : u(a < b ? a : b), v(a < b ? b : a) {}

    bool touches(VertexId x) const { return u == x || v == x; }
    bool intersects(const Edge& o) const { return touches(o.u) || touches(o.v); }
    VertexId other(VertexId x) const { return x == u ? v : u; }

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct EdgeHash {
    std::size_t operator()(const Edge& e) const noexcept {
        return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(static_cast<std::uint32_t>(e.u)) << 32) |
                                          static_cast<std::uint32_t>(e.v));
    }
};

enum class Palette : std::uint8_t { Alg, Greedy };

/// A color in one of the two disjoint palettes. Indices are 1-based.
struct ColorRef {
    Palette palette = Palette::Alg;
    std::int32_t index = 0;

    static ColorRef alg(std::int32_t i) { return {Palette::Alg, i}; }
    static ColorRef greedy(std::int32_t i) { return {Palette::Greedy, i}; }

    friend auto operator<=>(const ColorRef&, const ColorRef&) = default;
};

std::string to_string(const ColorRef& c);
std::string to_string(const Edge& e);

// Error types. Programming errors use assert; these cover bad inputs.
struct InvalidParams : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct StreamViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GenerationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TraceMissing : std::logic_error {
    using std::logic_error::logic_error;
};
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PoolExhaustion : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Growable bitset over small non-negative integers.
class ColorSet {
public:
    bool contains(std::int32_t i) const {
        auto w = static_cast<std::size_t>(i) >> 6;
        return w < words_.size() && ((words_[w] >> (i & 63)) & 1u);
    }
    void insert(std::int32_t i) {
        auto w = static_cast<std::size_t>(i) >> 6;
        if (w >= words_.size()) words_.resize(w + 1, 0);
        words_[w] |= std::uint64_t{1} << (i & 63);
    }
    void erase(std::int32_t i) {
        auto w = static_cast<std::size_t>(i) >> 6;
        if (w < words_.size()) words_[w] &= ~(std::uint64_t{1} << (i & 63));
    }
    /// Smallest index >= from not in the set.
    std::int32_t first_absent(std::int32_t from = 0) const;

private:
    std::vector<std::uint64_t> words_;
};

}  // namespace onlinecolor
