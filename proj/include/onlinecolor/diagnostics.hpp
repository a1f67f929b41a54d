#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "onlinecolor/colorers.hpp"

namespace onlinecolor {

/// Color subset C, 1-based Alg indices.
using ColorSubset = std::vector<std::int32_t>;
ColorSubset all_colors(int delta);

/// Relation of an arrival g to a tracked edge f = {u,v}, judged by bad
/// status at g's arrival. For Alg1 runs every arrival is Good.
enum class ArrivalClass : std::uint8_t { Good, Bad, Rest };
std::string to_string(ArrivalClass c);
ArrivalClass classify_arrival(const ArrivalRecord& g, const Edge& f);

/// One incident arrival applied to P_f. `next` is P^{(t)}_f; `next_bar` is
/// the overline variant, which scales up colors the cap held back (only
/// for the one step). Marked arrivals leave both equal to `prev`.
void step_with_overline(std::span<const double> prev, const ArrivalRecord& g, double cap, std::span<double> next,
                        std::span<double> next_bar);
/// Same, from raw event data (kind Sample with outcome, or Burn).
void step_with_overline(std::span<const double> prev, EventKind kind, std::int32_t color,
                        std::span<const double> pvec, double cap, std::span<double> next, std::span<double> next_bar);

struct TrajectoryPoint {
    Time t = 0;
    double z = 0.0;
    double y = 0.0;
    double zbar = 0.0;  // equals z at t = 0
    int bad_colors = 0;
    double z_c = 0.0;
    double y_c = 0.0;
    /// Running sum of (Zbar - Z) over good arrivals, over C.
    double drift_c = 0.0;
    /// Running sum of Z_C changes over non-good arrivals.
    double rest_c = 0.0;
    ArrivalClass cls = ArrivalClass::Good;
};

/// Values of one tracked edge at t = 0 and after every incident arrival
/// that precedes it. Y counts good arrivals only.
struct Trajectory {
    Edge f;
    ColorSubset colors;
    std::vector<TrajectoryPoint> points;

    /// max |Z_C - (|C|/delta (1 - eps) + Y_C - drift_C + rest_C)|.
    double max_decomposition_error(double initial_p) const;
};

/// Throws TraceMissing unless the run kept its trace.
Trajectory compute_trajectory(const RunResult& run, const Edge& f, const ColorSubset& colors = {});

/// {c : P^{(t)}_fc > cap}. f must not have arrived by t.
ColorSubset bad_colors(const RunResult& run, const Edge& f, Time t);

struct ScalingFactors {
    struct Neighbor {
        Edge f;
        Time t_f = 0;
        VertexId w = 0;              // shared endpoint with e
        std::vector<double> p;       // P^{(t_f - 1)}_f
        std::vector<double> r;       // R^{(t_f - 1)}_f
    };
    struct Step {
        Time t = 0;
        std::vector<double> s;  // S^{(t)}_e
        std::vector<double> p;  // P^{(t)}_e
    };

    Edge e;
    Time t_e = 0;  // records.size() + 1 when e never arrived
    double initial_p = 0.0;
    std::vector<double> s;    // S^{(t_e - 1)}_e
    std::vector<double> q_u;  // Q^{(t_e - 1)}_{U_u}
    std::vector<double> q_v;
    std::vector<Neighbor> neighbors;  // arrival order
    std::vector<Step> prefix;         // t = 0 and every incident arrival before t_e

    const std::vector<double>& q(VertexId w) const { return w == e.u ? q_u : q_v; }
    double q_subset(VertexId w, const ColorSubset& colors) const;
    /// max_c |S - (1 - Q_u)(1 - Q_v)|
    double max_identity_error() const;
    /// Relative excess of P over initial_p / S, max over prefix steps and
    /// colors: P S / initial_p - 1, <= 0 when the bound holds (up to
    /// rounding). Colors with S = 0 are skipped.
    double max_p_bound_excess() const;
    /// max over neighbors and colors of R - P; <= 0 expected.
    double max_r_excess() const;
};

ScalingFactors compute_scaling_factors(const RunResult& run, const Edge& e);

/// Sum over e in M of Z^{(t)}_{eC}.
double matching_sum(const RunResult& run, std::span<const Edge> matching, const ColorSubset& colors, Time t);

/// exp(-lambda^2 / (2 steps step_size^2)).
double azuma_bound(double lambda, double steps, double step_size);

/// Shortest decimal that round-trips; no locale.
std::string format_real(double x);

/// Columns: t,edge_u,edge_v,Z,Y,Zbar,bad_colors
void write_trajectory_csv(std::ostream& os, std::span<const Trajectory> trajectories);
inline constexpr const char* kTrajectoryCsvHeader = "t,edge_u,edge_v,Z,Y,Zbar,bad_colors";

}  // namespace onlinecolor
