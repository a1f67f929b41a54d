#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "onlinecolor/colorers.hpp"
#include "onlinecolor/generators.hpp"
#include "onlinecolor/ptable.hpp"

namespace support {

using namespace onlinecolor;

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

// Relative difference, scaled by the larger magnitude (absolute below 1e-300).
inline double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max({std::abs(a[i]), std::abs(b[i]), 1e-300});
        worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
    }
    return worst;
}

inline void apply_to_oracle(DenseOracle& d, const ArrivalRecord& r) {
    switch (r.branch) {
        case Branch::Sampled: d.arrive_sampled(r.edge, r.outcome); break;
        case Branch::BadColored: d.arrive_burned(r.edge, r.outcome); break;
        default: d.arrive_marked(r.edge);
    }
}

// Compares every pending pair of the lazy table with the oracle.
inline double pending_mismatch(const PTable& table, const DenseOracle& d, int n) {
    double worst = 0.0;
    for (VertexId a = 0; a < n; ++a)
        for (VertexId b = a + 1; b < n; ++b) {
            const Edge f(a, b);
            if (d.arrived(f)) continue;
            worst = std::max(worst, max_rel_diff(table.reconstruct(f), d.values(f)));
        }
    return worst;
}

// Replays a traced run through the dense oracle. Checks each arrival's
// P-vector and, at the end, every pair that never arrived.
inline double replay_mismatch(const RunResult& run) {
    const Params& p = *run.params;
    DenseOracle d(p.n, p.delta, p.eps, p.cap);
    double worst = 0.0;
    for (const auto& r : run.records) {
        worst = std::max(worst, max_rel_diff(r.pvec, d.values(r.edge)));
        apply_to_oracle(d, r);
    }
    return std::max(worst, pending_mismatch(*run.table, d, p.n));
}

// Every outcome of the engine on a fixed order, comparing lazy and dense
// tables at every node. Returns the worst relative mismatch.
inline void walk_all(const ProbabilisticColorer& eng, const DenseOracle& d, const std::vector<Edge>& edges,
                     std::size_t i, double& worst, long& nodes) {
    ++nodes;
    worst = std::max(worst, pending_mismatch(eng.table(), d, eng.params().n));
    if (i == edges.size()) return;
    const auto dec = eng.prepare(edges[i]);
    std::vector<std::int32_t> outcomes{kBottom};
    if (dec.branch == Branch::Sampled)
        for (std::int32_t c = 1; c <= eng.params().delta; ++c)
            if (dec.pvec[static_cast<std::size_t>(c - 1)] > 0.0) outcomes.push_back(c);
    if (dec.branch == Branch::Sampled && dec.z >= 1.0) outcomes.erase(outcomes.begin());
    for (auto k : outcomes) {
        ProbabilisticColorer next = eng;
        DenseOracle dn = d;
        apply_to_oracle(dn, next.commit(dec, k));
        walk_all(next, dn, edges, i + 1, worst, nodes);
    }
}

inline std::vector<Edge> edges_of(const ObliviousStream& s) { return s.edges(); }

inline Params params_for(int n, int delta, double eps, std::optional<double> cap = std::nullopt) {
    ParamOverrides o;
    o.eps = eps;
    o.cap = cap;
    return derive_params(n, delta, AdversaryMode::Adaptive, o);
}

}  // namespace support
