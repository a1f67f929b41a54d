#include "onlinecolor/diagnostics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace onlinecolor {

namespace {

double sum_over(std::span<const double> p, const ColorSubset& colors) {
    double s = 0.0;
    for (auto c : colors) s += p[static_cast<std::size_t>(c - 1)];
    return s;
}

double sum_all(std::span<const double> p) {
    double s = 0.0;
    for (double x : p) s += x;
    return s;
}

Time arrival_time(const RunResult& run, const Edge& e) {
    for (const auto& r : run.records)
        if (r.edge == e) return r.t;
    return static_cast<Time>(run.records.size()) + 1;
}

void require_trace(const RunResult& run) {
    if (!run.has_trace() || !run.params) throw TraceMissing("run was not traced (enable keep_trace)");
    if (!run.records.empty() && run.records.front().pvec.empty())
        throw TraceMissing("run records carry no P-vectors");
}

}  // namespace

ColorSubset all_colors(int delta) {
    ColorSubset out(static_cast<std::size_t>(delta));
    std::iota(out.begin(), out.end(), 1);
    return out;
}

std::string to_string(ArrivalClass c) {
    switch (c) {
        case ArrivalClass::Good: return "good";
        case ArrivalClass::Bad: return "bad";
        case ArrivalClass::Rest: return "rest";
    }
    return "?";
}

ArrivalClass classify_arrival(const ArrivalRecord& g, const Edge& f) {
    if (!g.u_bad && !g.v_bad) return ArrivalClass::Good;
    // Rest when a bad endpoint of g is an endpoint of f.
    if ((g.u_bad && f.touches(g.edge.u)) || (g.v_bad && f.touches(g.edge.v))) return ArrivalClass::Rest;
    return ArrivalClass::Bad;
}

void step_with_overline(std::span<const double> prev, EventKind kind, std::int32_t color,
                        std::span<const double> pvec, double cap, std::span<double> next,
                        std::span<double> next_bar) {
    std::copy(prev.begin(), prev.end(), next.begin());
    apply_event(next, VertexEvent{0, kind, color, 0}, pvec, cap);
    std::copy(next.begin(), next.end(), next_bar.begin());
    if (kind != EventKind::Sample) return;
    for (std::size_t c = 0; c < prev.size(); ++c) {
        if (static_cast<std::int32_t>(c + 1) == color) continue;
        if (prev[c] > cap) next_bar[c] = prev[c] / (1.0 - pvec[c]);
    }
}

void step_with_overline(std::span<const double> prev, const ArrivalRecord& g, double cap, std::span<double> next,
                        std::span<double> next_bar) {
    switch (g.branch) {
        case Branch::Sampled:
            step_with_overline(prev, EventKind::Sample, g.outcome, g.pvec, cap, next, next_bar);
            return;
        case Branch::BadColored:
            step_with_overline(prev, EventKind::Burn, g.outcome, {}, cap, next, next_bar);
            return;
        default:
            std::copy(prev.begin(), prev.end(), next.begin());
            std::copy(prev.begin(), prev.end(), next_bar.begin());
    }
}

double Trajectory::max_decomposition_error(double initial_p) const {
    const double z0 = static_cast<double>(colors.size()) * initial_p;
    double worst = 0.0;
    for (const auto& pt : points)
        worst = std::max(worst, std::abs(pt.z_c - (z0 + pt.y_c - pt.drift_c + pt.rest_c)));
    return worst;
}

Trajectory compute_trajectory(const RunResult& run, const Edge& f, const ColorSubset& colors) {
    require_trace(run);
    const Params& p = *run.params;
    const auto delta = static_cast<std::size_t>(p.delta);
    Trajectory tr;
    tr.f = f;
    tr.colors = colors.empty() ? all_colors(p.delta) : colors;
    const Time t_f = arrival_time(run, f);

    std::vector<double> cur(delta, p.initial_p()), next(delta), bar(delta);
    TrajectoryPoint pt;
    pt.z = pt.zbar = sum_all(cur);
    pt.z_c = sum_over(cur, tr.colors);
    pt.bad_colors = static_cast<int>(std::count_if(cur.begin(), cur.end(), [&](double x) { return x > p.cap; }));
    tr.points.push_back(pt);

    for (const auto& g : run.records) {
        if (g.t >= t_f) break;
        if (!g.edge.intersects(f)) continue;
        step_with_overline(cur, g, p.cap, next, bar);
        pt.t = g.t;
        pt.cls = run.badness ? classify_arrival(g, f) : ArrivalClass::Good;
        const double z_prev = sum_all(cur), zc_prev = sum_over(cur, tr.colors);
        pt.z = sum_all(next);
        pt.zbar = sum_all(bar);
        pt.z_c = sum_over(next, tr.colors);
        if (pt.cls == ArrivalClass::Good) {
            pt.y += pt.zbar - z_prev;
            const double zbar_c = sum_over(bar, tr.colors);
            pt.y_c += zbar_c - zc_prev;
            pt.drift_c += zbar_c - pt.z_c;
        } else {
            pt.rest_c += pt.z_c - zc_prev;
        }
        pt.bad_colors = static_cast<int>(std::count_if(next.begin(), next.end(), [&](double x) { return x > p.cap; }));
        tr.points.push_back(pt);
        cur.swap(next);
    }
    return tr;
}

ColorSubset bad_colors(const RunResult& run, const Edge& f, Time t) {
    require_trace(run);
    if (arrival_time(run, f) <= t) throw std::invalid_argument("edge " + to_string(f) + " arrived by the query time");
    const auto pv = run.table->reconstruct(f, t);
    ColorSubset out;
    for (std::size_t c = 0; c < pv.size(); ++c)
        if (pv[c] > run.params->cap) out.push_back(static_cast<std::int32_t>(c + 1));
    return out;
}

double ScalingFactors::q_subset(VertexId w, const ColorSubset& colors) const { return sum_over(q(w), colors); }

double ScalingFactors::max_identity_error() const {
    double worst = 0.0;
    for (std::size_t c = 0; c < s.size(); ++c) worst = std::max(worst, std::abs(s[c] - (1.0 - q_u[c]) * (1.0 - q_v[c])));
    return worst;
}

double ScalingFactors::max_p_bound_excess() const {
    double worst = -INFINITY;
    for (const auto& st : prefix)
        for (std::size_t c = 0; c < st.s.size(); ++c)
            if (st.s[c] > 0.0) worst = std::max(worst, st.p[c] * st.s[c] / initial_p - 1.0);
    return worst;
}

double ScalingFactors::max_r_excess() const {
    double worst = -INFINITY;
    for (const auto& nb : neighbors)
        for (std::size_t c = 0; c < nb.r.size(); ++c) worst = std::max(worst, nb.r[c] - nb.p[c]);
    return worst;
}

ScalingFactors compute_scaling_factors(const RunResult& run, const Edge& e) {
    require_trace(run);
    const Params& p = *run.params;
    const auto delta = static_cast<std::size_t>(p.delta);
    ScalingFactors sf;
    sf.e = e;
    sf.t_e = arrival_time(run, e);
    sf.initial_p = p.initial_p();
    sf.s.assign(delta, 1.0);
    sf.q_u.assign(delta, 0.0);
    sf.q_v.assign(delta, 0.0);
    // Running prod over U_w of (1 - P^{(t_g - 1)}_g), per endpoint.
    std::vector<double> prod_u(delta, 1.0), prod_v(delta, 1.0);

    sf.prefix.push_back({0, sf.s, run.table->reconstruct(e, 0)});
    for (const auto& g : run.records) {
        if (g.t >= sf.t_e) break;
        if (!g.edge.intersects(e)) continue;
        const VertexId w = g.edge.touches(e.u) ? e.u : e.v;
        auto& prod = w == e.u ? prod_u : prod_v;
        auto& q = w == e.u ? sf.q_u : sf.q_v;
        ScalingFactors::Neighbor nb{g.edge, g.t, w, g.pvec, std::vector<double>(delta)};
        for (std::size_t c = 0; c < delta; ++c) {
            nb.r[c] = g.pvec[c] * prod[c];
            q[c] += nb.r[c];
            prod[c] *= 1.0 - g.pvec[c];
            sf.s[c] *= 1.0 - g.pvec[c];
        }
        sf.neighbors.push_back(std::move(nb));
        sf.prefix.push_back({g.t, sf.s, run.table->reconstruct(e, g.t)});
    }
    return sf;
}

double matching_sum(const RunResult& run, std::span<const Edge> matching, const ColorSubset& colors, Time t) {
    if (matching.empty()) return 0.0;
    require_trace(run);
    double total = 0.0;
    for (const auto& e : matching) {
        if (arrival_time(run, e) <= t) throw std::invalid_argument("edge " + to_string(e) + " arrived by the query time");
        total += sum_over(run.table->reconstruct(e, t), colors);
    }
    return total;
}

double azuma_bound(double lambda, double steps, double step_size) {
    if (lambda < 0 || steps <= 0 || step_size <= 0) throw std::invalid_argument("azuma_bound needs positive inputs");
    return std::exp(-lambda * lambda / (2.0 * steps * step_size * step_size));
}

std::string format_real(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

void write_trajectory_csv(std::ostream& os, std::span<const Trajectory> trajectories) {
    os << kTrajectoryCsvHeader << '\n';
    for (const auto& tr : trajectories)
        for (const auto& pt : tr.points)
            os << pt.t << ',' << tr.f.u << ',' << tr.f.v << ',' << format_real(pt.z) << ',' << format_real(pt.y) << ','
               << format_real(pt.zbar) << ',' << pt.bad_colors << '\n';
}

}  // namespace onlinecolor
