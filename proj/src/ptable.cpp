#include "onlinecolor/ptable.hpp"

#include <cassert>
#include <ostream>

namespace onlinecolor {

void apply_event(std::span<double> p, const VertexEvent& ev, std::span<const double> pvec, double cap) {
    const std::size_t delta = p.size();
    if (ev.kind == EventKind::Burn) {
        p[static_cast<std::size_t>(ev.color - 1)] = 0.0;
        return;
    }
    // Reads of p[c] see the pre-event value; the cap test is exact (<=).
    for (std::size_t c = 0; c < delta; ++c) {
        const double cur = p[c];
        p[c] = cur <= cap ? cur / (1.0 - pvec[c]) : cur;
    }
    if (ev.color != kBottom) p[static_cast<std::size_t>(ev.color - 1)] = 0.0;
}

PTable::PTable(int n, int delta, double eps, double cap)
    : delta_(delta), cap_(cap), initial_((1.0 - eps) / delta), logs_(static_cast<std::size_t>(n)) {}

void PTable::reconstruct_into(const Edge& e, std::span<double> out, Time upto) const {
    assert(out.size() == static_cast<std::size_t>(delta_));
    std::fill(out.begin(), out.end(), initial_);
    for_each_event(e, upto, [&](const VertexEvent& ev) {
        apply_event(out, ev, ev.kind == EventKind::Sample ? pvec(ev) : std::span<const double>{}, cap_);
    });
}

std::vector<double> PTable::reconstruct(const Edge& e, Time upto) const {
    std::vector<double> out(static_cast<std::size_t>(delta_));
    reconstruct_into(e, out, upto);
    return out;
}

double PTable::z_value(const Edge& e, Time upto) const {
    double z = 0.0;
    for (double x : reconstruct(e, upto)) z += x;
    return z;
}

void PTable::record_sample(Time t, const Edge& e, std::span<const double> pv, std::int32_t chosen) {
    assert(pv.size() == static_cast<std::size_t>(delta_));
    assert(chosen >= kBottom && chosen <= delta_);
    const auto slot = static_cast<std::uint32_t>(arena_.size() / static_cast<std::size_t>(delta_));
    arena_.insert(arena_.end(), pv.begin(), pv.end());
    for (VertexId x : {e.u, e.v}) {
        auto& lg = logs_[static_cast<std::size_t>(x)];
        assert(lg.empty() || lg.back().time < t);
        lg.push_back({t, EventKind::Sample, chosen, slot});
    }
}

void PTable::record_burn(Time t, const Edge& e, std::int32_t color) {
    assert(color >= 1 && color <= delta_);
    for (VertexId x : {e.u, e.v}) {
        auto& lg = logs_[static_cast<std::size_t>(x)];
        assert(lg.empty() || lg.back().time < t);
        lg.push_back({t, EventKind::Burn, color, 0});
    }
}

void PTable::dump_trace(std::ostream& os) const {
    os << "t,vertex,kind,color,chosen\n";
    for (std::size_t x = 0; x < logs_.size(); ++x) {
        for (const auto& ev : logs_[x]) {
            if (ev.kind == EventKind::Sample) {
                os << ev.time << ',' << x << ",sample,," << (ev.color == kBottom ? std::string("bottom") : std::to_string(ev.color))
                   << '\n';
            } else {
                os << ev.time << ',' << x << ",burn," << ev.color << ",\n";
            }
        }
    }
}

DenseOracle::DenseOracle(int n, int delta, double eps, double cap)
    : n_(n),
      delta_(delta),
      cap_(cap),
      p_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * static_cast<std::size_t>(delta), (1.0 - eps) / delta),
      arrived_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0) {}

std::size_t DenseOracle::index(const Edge& e) const {
    return static_cast<std::size_t>(e.u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(e.v);
}

std::vector<double> DenseOracle::values(const Edge& e) const {
    const double* r = row(e);
    return {r, r + delta_};
}

void DenseOracle::arrive_marked(const Edge& et) { arrived_[index(et)] = 1; }

void DenseOracle::arrive_sampled(const Edge& et, std::int32_t chosen) {
    arrived_[index(et)] = 1;
    const std::vector<double> pe = values(et);  // P^{(t-1)}_{e_t, .}
    for (VertexId w : {et.u, et.v}) {
        for (VertexId x = 0; x < n_; ++x) {
            if (x == w) continue;
            Edge f(w, x);
            if (f == et || arrived(f)) continue;
            // f through both endpoints would be e_t itself, so each f is visited once.
            double* pf = &p_[index(f) * static_cast<std::size_t>(delta_)];
            for (int c = 1; c <= delta_; ++c) {
                double& v = pf[c - 1];
                if (c == chosen) {
                    v = 0.0;
                } else if (v <= cap_) {
                    v = v / (1.0 - pe[static_cast<std::size_t>(c - 1)]);
                }
            }
        }
    }
}

void DenseOracle::arrive_burned(const Edge& et, std::int32_t color) {
    arrived_[index(et)] = 1;
    for (VertexId w : {et.u, et.v}) {
        for (VertexId x = 0; x < n_; ++x) {
            if (x == w) continue;
            Edge f(w, x);
            if (f == et || arrived(f)) continue;
            p_[index(f) * static_cast<std::size_t>(delta_) + static_cast<std::size_t>(color - 1)] = 0.0;
        }
    }
}

}  // namespace onlinecolor
