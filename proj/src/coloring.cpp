#include "onlinecolor/coloring.hpp"

#include <bit>
#include <cassert>
#include <sstream>

namespace onlinecolor {

std::string to_string(const ColorRef& c) {
    return (c.palette == Palette::Alg ? "A:" : "G:") + std::to_string(c.index);
}

std::string to_string(const Edge& e) { return std::to_string(e.u) + "-" + std::to_string(e.v); }

std::int32_t ColorSet::first_absent(std::int32_t from) const {
    auto w = static_cast<std::size_t>(from) >> 6;
    if (w >= words_.size()) return from;
    std::uint64_t free_bits = ~words_[w] & (~std::uint64_t{0} << (from & 63));
    while (free_bits == 0) {
        if (++w >= words_.size()) return static_cast<std::int32_t>(w << 6);
        free_bits = ~words_[w];
    }
    return static_cast<std::int32_t>((w << 6) + static_cast<std::size_t>(std::countr_zero(free_bits)));
}

ColoringState::ColoringState(int n, int alg_palette_size)
    : alg_palette_size_(alg_palette_size), used_alg_(static_cast<std::size_t>(n)), used_greedy_(static_cast<std::size_t>(n)) {}

bool ColoringState::is_free(VertexId x, ColorRef c) const {
    const auto& sets = c.palette == Palette::Alg ? used_alg_ : used_greedy_;
    return !sets[static_cast<std::size_t>(x)].contains(c.index);
}

void ColoringState::assign(const Edge& e, ColorRef c) {
    assert(c.index >= 1);
    assert(c.palette != Palette::Alg || alg_palette_size_ == 0 || c.index <= alg_palette_size_);
    auto& sets = c.palette == Palette::Alg ? used_alg_ : used_greedy_;
    sets[static_cast<std::size_t>(e.u)].insert(c.index);
    sets[static_cast<std::size_t>(e.v)].insert(c.index);
    assignment_[e] = c;
    if (c.palette == Palette::Greedy && c.index > greedy_palette_size_) greedy_palette_size_ = c.index;
}

std::optional<ColorRef> ColoringState::color_of(const Edge& e) const {
    auto it = assignment_.find(e);
    if (it == assignment_.end()) return std::nullopt;
    return it->second;
}

ColorRef greedy_assign(ColoringState& state, const Edge& e) {
    std::int32_t i = 1;
    while (!state.is_free(e, ColorRef::greedy(i))) ++i;
    const auto c = ColorRef::greedy(i);
    state.assign(e, c);
    return c;
}

ValidationReport validate_coloring(std::span<const Edge> edges, const ColoringState& state) {
    ValidationReport report;
    std::map<std::pair<VertexId, ColorRef>, Edge> seen;
    for (const auto& e : edges) {
        auto c = state.color_of(e);
        if (!c) {
            report.unassigned.push_back(e);
            continue;
        }
        for (VertexId x : {e.u, e.v}) {
            auto [it, inserted] = seen.try_emplace({x, *c}, e);
            if (!inserted && it->second != e) report.conflicts.push_back({x, it->second, e, *c});
        }
    }
    return report;
}

std::string ValidationReport::describe() const {
    std::ostringstream os;
    for (const auto& c : conflicts)
        os << "conflict at vertex " << c.vertex << ": " << to_string(c.first) << " and " << to_string(c.second)
           << " share " << to_string(c.color) << "\n";
    for (const auto& e : unassigned) os << "unassigned edge " << to_string(e) << "\n";
    return os.str();
}

}  // namespace onlinecolor
