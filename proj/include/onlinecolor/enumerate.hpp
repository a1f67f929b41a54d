#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "onlinecolor/colorers.hpp"
#include "onlinecolor/stream.hpp"

namespace onlinecolor {

struct EnumerateOptions {
    /// Maximum number of tree nodes visited.
    std::int64_t budget = 1'000'000;
    /// Randomized greedy palette; ignored otherwise.
    int palette_size = 0;
    /// Z/Y/Q checks over potential edges (Alg1/Alg2 only).
    bool martingale_checks = true;
    /// Keep the outcome distribution when it has at most this many leaves.
    std::size_t max_distribution = 4096;
};

/// Exact probability-weighted walk over every branch of the colorer's
/// random choices on a fixed arrival sequence.
struct EnumerationReport {
    Algorithm algorithm = Algorithm::Alg1;
    std::int64_t nodes = 0;
    std::int64_t leaves = 0;
    double probability_sum = 0.0;
    double failure_probability = 0.0;
    /// Outcome (one token per arrival, e.g. "A:2 G:1 -") -> probability.
    std::map<std::string, double> distribution;
    bool distribution_truncated = false;
    /// Per arrival index: probability that the edge is marked.
    std::vector<double> marked_probability;

    // Maxima over tree nodes and potential edges f not yet arrived.
    double max_z_drift = -INFINITY;        // E[dZ_f | node]; <= 0 expected
    double max_abs_y_drift = 0.0;          // |E[dY_f | node]|
    double max_abs_z_step = 0.0;           // |dZ_f| over positive-probability branches
    double max_abs_y_step = 0.0;
    double max_decomposition_error = 0.0;  // Z_f vs 1 - eps + Y_f - drift + rest
    double max_q_drift = -INFINITY;        // E[dQ_{U_w c} | node] per color
    double max_abs_dq_step = 0.0;          // max_C |dQ_{U_w C}| from arrivals away from w
    std::int64_t checked_pairs = 0;
};

EnumerationReport enumerate_exact(const Instance& instance, Algorithm algorithm, const Params* params,
                                  const EnumerateOptions& opts = {});

}  // namespace onlinecolor
