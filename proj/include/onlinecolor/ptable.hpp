#pragma once

#include <cassert>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "onlinecolor/params.hpp"
#include "onlinecolor/types.hpp"

namespace onlinecolor {

inline constexpr std::int32_t kBottom = 0;  // the "no color" sample outcome

enum class EventKind : std::uint8_t { Sample, Burn };

/// One update recorded at a vertex. A Sample carries the arriving edge's
/// P-vector (stored once in the table's arena) and the sampled color or
/// kBottom; a Burn zeroes a single color.
struct VertexEvent {
    Time time = 0;
    EventKind kind = EventKind::Sample;
    std::int32_t color = kBottom;
    std::uint32_t pvec_slot = 0;  // Sample only
};

/// Applies one event to a P-vector in place (colors are 1-based, p[c-1]).
///   Sample: zero the chosen color; every other color whose current value is
///           <= cap is divided by (1 - pvec[c]). Bottom excludes nothing.
///   Burn:   zero one color.
void apply_event(std::span<double> p, const VertexEvent& ev, std::span<const double> pvec, double cap);

/// Lazy representation of every P_ec: per-vertex event logs, replayed on
/// demand. P_fc depends only on events at f's endpoints, so replaying the
/// merged logs in time order reproduces the eager update exactly.
class PTable {
public:
    PTable() = default;
    PTable(int n, int delta, double eps, double cap);
    explicit PTable(const Params& p) : PTable(p.n, p.delta, p.eps, p.cap) {}

    int n() const { return static_cast<int>(logs_.size()); }
    int delta() const { return delta_; }
    double cap() const { return cap_; }
    double initial() const { return initial_; }

    /// P-vector of a not-yet-arrived edge after all recorded events with
    /// time <= upto.
    std::vector<double> reconstruct(const Edge& e, Time upto = kEnd) const;
    void reconstruct_into(const Edge& e, std::span<double> out, Time upto = kEnd) const;
    /// Sum of reconstruct(e), ascending color order.
    double z_value(const Edge& e, Time upto = kEnd) const;

    void record_sample(Time t, const Edge& e, std::span<const double> pvec, std::int32_t chosen);
    void record_burn(Time t, const Edge& e, std::int32_t color);

    std::span<const VertexEvent> log(VertexId x) const { return logs_[static_cast<std::size_t>(x)]; }
    std::span<const double> pvec(const VertexEvent& ev) const {
        return {arena_.data() + static_cast<std::size_t>(ev.pvec_slot) * static_cast<std::size_t>(delta_),
                static_cast<std::size_t>(delta_)};
    }

    /// Visits the events at e's endpoints in time order, up to `upto`.
    template <class Fn>
    void for_each_event(const Edge& e, Time upto, Fn&& fn) const {
        auto a = log(e.u), b = log(e.v);
        std::size_t i = 0, j = 0;
        while (true) {
            const bool take_a = i < a.size() && (j >= b.size() || a[i].time < b[j].time);
            const VertexEvent* next = take_a ? &a[i] : (j < b.size() ? &b[j] : nullptr);
            if (next == nullptr || next->time > upto) break;
            // Only e's own arrival lands in both logs; replay must stop before it.
            assert(i >= a.size() || j >= b.size() || a[i].time != b[j].time);
            take_a ? ++i : ++j;
            fn(*next);
        }
    }

    /// Debug dump, one `t,vertex,kind,color,chosen` line per vertex event.
    void dump_trace(std::ostream& os) const;

    static constexpr Time kEnd = INT64_MAX;

private:
    int delta_ = 0;
    double cap_ = 0.0;
    double initial_ = 0.0;
    std::vector<std::vector<VertexEvent>> logs_;
    std::vector<double> arena_;
};

/// Eager twin of PTable: an explicit P matrix over every potential edge,
/// updated eagerly on every arrival. Used only for
/// differential testing; memory is O(n^2 delta).
class DenseOracle {
public:
    DenseOracle(int n, int delta, double eps, double cap);

    const double* row(const Edge& e) const { return &p_[index(e) * static_cast<std::size_t>(delta_)]; }
    std::vector<double> values(const Edge& e) const;
    bool arrived(const Edge& e) const { return arrived_[index(e)] != 0; }

    /// Arrival of e_t that was marked because its Z exceeded 1: no updates.
    void arrive_marked(const Edge& et);
    /// Arrival of e_t that sampled `chosen` (kBottom for none).
    void arrive_sampled(const Edge& et, std::int32_t chosen);
    /// Arrival of e_t colored at a bad vertex: burn `color` at neighbors.
    void arrive_burned(const Edge& et, std::int32_t color);

private:
    std::size_t index(const Edge& e) const;

    int n_;
    int delta_;
    double cap_;
    std::vector<double> p_;
    std::vector<char> arrived_;
};

}  // namespace onlinecolor
