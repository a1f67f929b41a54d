#pragma once

#include <memory>

#include "onlinecolor/rng.hpp"
#include "onlinecolor/stream.hpp"

namespace onlinecolor {

/// Two stars with delta-1 leaves each, roots 0 and delta, joined by a bridge
/// that arrives last. 2*delta vertices, 2*delta-1 edges.
ObliviousStream gen_two_star_bridge(int delta);

/// Disjoint copies of the two-star gadget. With `interleave`, arrivals are
/// dealt round-robin across copies (each bridge still last in its copy).
ObliviousStream gen_gadget_farm(int delta, int copies, bool interleave = false);

/// Simple graph with m edges and max degree <= delta, built by sampling
/// endpoints among unsaturated vertices with a retry budget of 100*m, then
/// shuffled. Throws GenerationFailure when the budget runs out.
ObliviousStream gen_random_graph(int n, int delta, int m, RngHandle& rng);

/// Same arrivals, uniformly permuted.
ObliviousStream wrap_random_order(const ObliviousStream& s, RngHandle& rng);

/// List instance that defeats every palette-respecting colorer: star edges
/// get pairwise disjoint palettes of size 2*delta-1; the bridge's palette
/// is exactly the 2*delta-2 colors observed on its neighbors.
std::unique_ptr<AdaptiveStream> gen_list_lb_deterministic(int delta);

/// Oblivious list instance: `copies` disjoint two-star gadgets with
/// disjoint star palettes of size `star_palette_size` (default 2*delta-1).
/// Each bridge palette takes one uniform color from every neighbor's
/// palette, deduplicated.
ObliviousStream gen_list_lb_randomized(int delta, int copies, RngHandle& rng, int star_palette_size = 0);

}  // namespace onlinecolor
