#include "onlinecolor/bias_tree.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "onlinecolor/types.hpp"

namespace onlinecolor {

namespace {

using Words = std::vector<std::uint64_t>;

struct Pool {
    std::size_t words = 0;
    std::vector<std::uint64_t> bits;  // pool_size * words

    const std::uint64_t* node(std::size_t i) const { return bits.data() + i * words; }
    std::uint64_t* node(std::size_t i) { return bits.data() + i * words; }
};

int count_range(const std::uint64_t* p, int lo, int hi) {
    int total = 0;
    for (int c = lo; c < hi; ++c) total += static_cast<int>((p[c >> 6] >> (c & 63)) & 1u);
    return total;
}

// r-th (0-based) set bit of the word array.
int select_bit(const std::uint64_t* p, std::size_t words, int r) {
    for (std::size_t w = 0; w < words; ++w) {
        int pc = std::popcount(p[w]);
        if (r < pc) {
            std::uint64_t x = p[w];
            for (int k = 0; k < r; ++k) x &= x - 1;
            return static_cast<int>(w * 64 + static_cast<std::size_t>(std::countr_zero(x)));
        }
        r -= pc;
    }
    return -1;
}

LayerStats summarize(const Pool& pool, std::size_t count, int palette_size, int layer) {
    LayerStats s;
    s.layer = layer;
    const int half = palette_size / 2;
    for (std::size_t i = 0; i < count; ++i) {
        const int l = count_range(pool.node(i), 0, half);
        const int r = count_range(pool.node(i), half, palette_size);
        const double size = l + r;
        const double lf = size > 0 ? l / size : 0.5;
        s.mean_signed_bias += lf - 0.5;
        s.mean_bias += std::max(lf, 1.0 - lf) - 0.5;
        if (l == 0 || r == 0) s.saturated_fraction += 1.0;
    }
    s.mean_bias /= static_cast<double>(count);
    s.mean_signed_bias /= static_cast<double>(count);
    s.saturated_fraction /= static_cast<double>(count);
    return s;
}

}  // namespace

int bias_tree_palette_size(int delta, double palette_ratio) {
    return 2 * static_cast<int>(std::lround(palette_ratio * delta / 2.0));
}

bool BiasTreeReport::bias_strictly_increasing() const {
    for (std::size_t i = 1; i < layers.size(); ++i)
        if (!(layers[i].mean_bias > layers[i - 1].mean_bias)) return false;
    return true;
}

bool BiasTreeReport::bias_non_increasing_from(int from_layer) const {
    for (std::size_t i = static_cast<std::size_t>(from_layer) + 1; i < layers.size(); ++i)
        if (layers[i].mean_bias > layers[i - 1].mean_bias) return false;
    return true;
}

BiasTreeReport run_bias_tree(const BiasTreeConfig& cfg) {
    if (cfg.delta < 2) throw std::invalid_argument("bias tree needs delta >= 2");
    if (cfg.layers < 1) throw std::invalid_argument("bias tree needs layers >= 1");
    if (cfg.pool_size < 1) throw std::invalid_argument("pool_size must be >= 1");
    const int palette = bias_tree_palette_size(cfg.delta, cfg.palette_ratio);
    if (palette < cfg.delta) throw std::invalid_argument("palette must hold at least delta colors");

    BiasTreeReport report;
    report.palette_size = palette;
    const int half = palette / 2;
    const std::size_t words = (static_cast<std::size_t>(palette) + 63) / 64;
    const auto pool_n = static_cast<std::size_t>(cfg.pool_size);
    const int children = cfg.delta - 1;
    RngHandle root(cfg.seed);

    Words full(words, 0);
    for (int c = 0; c < palette; ++c) full[static_cast<std::size_t>(c) >> 6] |= std::uint64_t{1} << (c & 63);

    // Layer 0: star centers whose leaves have full palettes, so each star
    // edge takes a uniform color from the center's remaining palette.
    Pool pool{words, std::vector<std::uint64_t>(pool_n * words)};
    std::vector<int> order(static_cast<std::size_t>(palette));
    std::size_t filled = 0;
    std::int64_t attempts = 0;
    const std::int64_t max_attempts = static_cast<std::int64_t>(cfg.max_attempts_factor) * cfg.pool_size;
    while (filled < pool_n) {
        if (attempts >= max_attempts)
            throw PoolExhaustion("layer-0 filter filled " + std::to_string(filled) + " of " +
                                 std::to_string(pool_n) + " slots");
        RngHandle rng = root.fork(static_cast<std::uint64_t>(attempts++));
        std::iota(order.begin(), order.end(), 0);
        std::uint64_t* node = pool.node(filled);
        std::copy(full.begin(), full.end(), node);
        for (int j = 0; j < children; ++j) {
            auto k = static_cast<std::size_t>(j) + rng.uniform_index(static_cast<std::uint64_t>(palette - j));
            std::swap(order[static_cast<std::size_t>(j)], order[k]);
            const int c = order[static_cast<std::size_t>(j)];
            node[static_cast<std::size_t>(c) >> 6] &= ~(std::uint64_t{1} << (c & 63));
        }
        const int l = count_range(node, 0, half);
        const int r = count_range(node, half, palette);
        if (l > r) ++filled;
    }
    auto s0 = summarize(pool, pool_n, palette, 0);
    s0.acceptance_rate = static_cast<double>(pool_n) / static_cast<double>(attempts);
    report.layers.push_back(s0);

    Words shared(words);
    for (int layer = 1; layer < cfg.layers; ++layer) {
        Pool next{words, std::vector<std::uint64_t>(pool_n * words)};
        std::int64_t failures = 0;
        for (std::size_t i = 0; i < pool_n; ++i) {
            RngHandle rng = root.fork((static_cast<std::uint64_t>(layer) << 40) | i);
            std::uint64_t* node = next.node(i);
            std::copy(full.begin(), full.end(), node);
            for (int j = 0; j < children; ++j) {
                const std::uint64_t* child = pool.node(rng.uniform_index(pool_n));
                int common = 0;
                for (std::size_t w = 0; w < words; ++w) {
                    shared[w] = node[w] & child[w];
                    common += std::popcount(shared[w]);
                }
                if (common == 0) {
                    ++failures;
                    continue;
                }
                const int c = select_bit(shared.data(), words, static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(common))));
                node[static_cast<std::size_t>(c) >> 6] &= ~(std::uint64_t{1} << (c & 63));
            }
        }
        pool = std::move(next);
        auto s = summarize(pool, pool_n, palette, layer);
        s.failures = failures;
        report.layers.push_back(s);
    }
    return report;
}

}  // namespace onlinecolor
