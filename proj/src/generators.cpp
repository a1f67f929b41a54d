#include "onlinecolor/generators.hpp"

#include <algorithm>
#include <unordered_set>

namespace onlinecolor {

namespace {

// Gadget k occupies vertices [2*delta*k, 2*delta*(k+1)): roots at offset 0
// and delta, leaves after each root.
std::vector<Arrival> gadget_arrivals(int delta, int k) {
    const VertexId base = 2 * delta * k;
    const VertexId u = base, v = base + delta;
    std::vector<Arrival> out;
    for (int i = 1; i < delta; ++i) out.push_back({Edge(u, u + i), {}});
    for (int i = 1; i < delta; ++i) out.push_back({Edge(v, v + i), {}});
    out.push_back({Edge(u, v), {}});
    return out;
}

}  // namespace

ObliviousStream gen_two_star_bridge(int delta) { return gen_gadget_farm(delta, 1); }

ObliviousStream gen_gadget_farm(int delta, int copies, bool interleave) {
    if (delta < 2) throw std::invalid_argument("two-star gadget needs delta >= 2");
    if (copies < 1) throw std::invalid_argument("copies must be >= 1");
    std::vector<std::vector<Arrival>> gadgets;
    for (int k = 0; k < copies; ++k) gadgets.push_back(gadget_arrivals(delta, k));
    std::vector<Arrival> all;
    if (interleave) {
        for (std::size_t i = 0; i < gadgets[0].size(); ++i)
            for (auto& g : gadgets) all.push_back(g[i]);
    } else {
        for (auto& g : gadgets) all.insert(all.end(), g.begin(), g.end());
    }
    return ObliviousStream(2 * delta * copies, delta, std::move(all));
}

ObliviousStream gen_random_graph(int n, int delta, int m, RngHandle& rng) {
    if (n < 0 || delta < 0 || m < 0) throw GenerationFailure("negative size");
    const auto max_edges = std::min<std::int64_t>(static_cast<std::int64_t>(n) * (n - 1) / 2,
                                                  static_cast<std::int64_t>(n) * delta / 2);
    if (m > max_edges) throw GenerationFailure("no simple graph with max degree " + std::to_string(delta) + " has " +
                                               std::to_string(m) + " edges on " + std::to_string(n) + " vertices");
    std::vector<VertexId> active(static_cast<std::size_t>(n));
    std::vector<std::size_t> slot(static_cast<std::size_t>(n));
    for (VertexId i = 0; i < n; ++i) active[static_cast<std::size_t>(i)] = i, slot[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
    std::vector<int> degree(static_cast<std::size_t>(n), 0);
    auto deactivate = [&](VertexId x) {
        auto s = slot[static_cast<std::size_t>(x)];
        VertexId last = active.back();
        active[s] = last;
        slot[static_cast<std::size_t>(last)] = s;
        active.pop_back();
    };
    if (delta == 0) active.clear();

    std::unordered_set<Edge, EdgeHash> seen;
    std::vector<Arrival> arrivals;
    arrivals.reserve(static_cast<std::size_t>(m));
    const std::int64_t budget = 100 * static_cast<std::int64_t>(m);
    std::int64_t tries = 0;
    while (static_cast<int>(arrivals.size()) < m) {
        if (++tries > budget || active.size() < 2)
            throw GenerationFailure("random graph generation exhausted its retry budget after " +
                                    std::to_string(arrivals.size()) + " edges");
        VertexId a = active[rng.uniform_index(active.size())];
        VertexId b = active[rng.uniform_index(active.size())];
        if (a == b) continue;
        Edge e(a, b);
        if (!seen.insert(e).second) continue;
        arrivals.push_back({e, {}});
        for (VertexId x : {a, b})
            if (++degree[static_cast<std::size_t>(x)] == delta) deactivate(x);
    }
    rng.shuffle(std::span<Arrival>(arrivals));
    return ObliviousStream(n, delta, std::move(arrivals));
}

ObliviousStream wrap_random_order(const ObliviousStream& s, RngHandle& rng) {
    auto arrivals = s.arrivals();
    rng.shuffle(std::span<Arrival>(arrivals));
    return ObliviousStream(s.n(), s.delta(), std::move(arrivals));
}

std::unique_ptr<AdaptiveStream> gen_list_lb_deterministic(int delta) {
    if (delta < 2) throw std::invalid_argument("list lower bound needs delta >= 2");
    const auto prefix = gadget_arrivals(delta, 0);  // bridge last
    const int width = 2 * delta - 1;
    auto gen = [prefix, width](const PublicHistory& h) -> std::optional<Arrival> {
        const std::size_t i = h.size();
        if (i + 1 < prefix.size()) {
            Arrival a = prefix[i];
            for (int c = 1; c <= width; ++c) a.palette.push_back(static_cast<std::int32_t>(i) * width + c);
            return a;
        }
        if (i + 1 == prefix.size()) {
            Arrival bridge = prefix[i];
            for (const auto& entry : h.entries)
                if (entry.color && entry.edge.intersects(bridge.edge)) bridge.palette.push_back(entry.color->index);
            return bridge;
        }
        return std::nullopt;
    };
    return std::make_unique<AdaptiveStream>(2 * delta, delta, gen);
}

ObliviousStream gen_list_lb_randomized(int delta, int copies, RngHandle& rng, int star_palette_size) {
    if (delta < 2) throw std::invalid_argument("list lower bound needs delta >= 2");
    if (copies < 1) throw std::invalid_argument("copies must be >= 1");
    const int width = star_palette_size > 0 ? star_palette_size : 2 * delta - 1;
    std::vector<Arrival> all;
    std::int32_t next_color = 1;
    for (int k = 0; k < copies; ++k) {
        auto g = gadget_arrivals(delta, k);
        std::vector<std::int32_t> bridge_palette;
        for (std::size_t i = 0; i + 1 < g.size(); ++i) {
            for (int c = 0; c < width; ++c) g[i].palette.push_back(next_color++);
            auto pick = g[i].palette[rng.uniform_index(static_cast<std::uint64_t>(width))];
            if (std::find(bridge_palette.begin(), bridge_palette.end(), pick) == bridge_palette.end())
                bridge_palette.push_back(pick);
        }
        g.back().palette = std::move(bridge_palette);
        all.insert(all.end(), g.begin(), g.end());
    }
    return ObliviousStream(2 * delta * copies, delta, std::move(all));
}

}  // namespace onlinecolor
