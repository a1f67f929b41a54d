#pragma once

#include <cstdint>
#include <vector>

#include "onlinecolor/rng.hpp"

namespace onlinecolor {

struct BiasTreeConfig {
    int delta = 256;
    double palette_ratio = 1.5;
    int layers = 6;  // layer 0 (filtered stars) plus layers-1 built layers
    int pool_size = 4096;
    std::uint64_t seed = 1;
    /// Layer-0 candidate budget, as a multiple of pool_size.
    int max_attempts_factor = 100;
};

struct LayerStats {
    int layer = 0;
    double mean_bias = 0.0;         // mean of max(l, r) - 1/2
    double mean_signed_bias = 0.0;  // mean of l - 1/2
    double saturated_fraction = 0.0;
    std::int64_t failures = 0;  // child edges with an empty shared palette
    double acceptance_rate = 1.0;  // layer 0 only
};

struct BiasTreeReport {
    int palette_size = 0;
    std::vector<LayerStats> layers;

    bool bias_strictly_increasing() const;
    /// Non-increasing from `from_layer` onward.
    bool bias_non_increasing_from(int from_layer) const;
};

/// Palette actually used: ratio*delta rounded to the nearest even integer
/// so that it splits into equal halves L and R.
int bias_tree_palette_size(int delta, double palette_ratio);

/// Randomized greedy on the adaptive bias-amplification tree, simulated
/// with a pooled bootstrap: every layer keeps pool_size node palettes and
/// each new node draws its delta-1 children with replacement from the
/// previous layer's pool. Throws PoolExhaustion if the layer-0 filter
/// (keep l > r) cannot fill the pool within budget.
BiasTreeReport run_bias_tree(const BiasTreeConfig& cfg);

}  // namespace onlinecolor
