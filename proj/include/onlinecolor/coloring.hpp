#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "onlinecolor/types.hpp"

namespace onlinecolor {

/// Edge-to-color assignment plus per-vertex used-color sets for both
/// palettes. Single writer.
class ColoringState {
public:
    ColoringState() = default;
    /// alg_palette_size bounds Alg indices; 0 disables the bound.
    ColoringState(int n, int alg_palette_size);

    int n() const { return static_cast<int>(used_alg_.size()); }
    int alg_palette_size() const { return alg_palette_size_; }
    int greedy_palette_size() const { return greedy_palette_size_; }

    bool is_free(VertexId x, ColorRef c) const;
    bool is_free(const Edge& e, ColorRef c) const { return is_free(e.u, c) && is_free(e.v, c); }

    /// Records e -> c. Does not check properness; validate_coloring does.
    void assign(const Edge& e, ColorRef c);
    std::optional<ColorRef> color_of(const Edge& e) const;
    const std::map<Edge, ColorRef>& assignment() const { return assignment_; }

    friend bool operator==(const ColoringState& a, const ColoringState& b) {
        return a.assignment_ == b.assignment_ && a.greedy_palette_size_ == b.greedy_palette_size_;
    }

private:
    int alg_palette_size_ = 0;
    int greedy_palette_size_ = 0;
    std::map<Edge, ColorRef> assignment_;
    std::vector<ColorSet> used_alg_;
    std::vector<ColorSet> used_greedy_;
};

/// First-fit over the backup palette: the smallest greedy index free at
/// both endpoints, growing the palette when every existing index is blocked.
ColorRef greedy_assign(ColoringState& state, const Edge& e);

struct Conflict {
    VertexId vertex;
    Edge first;
    Edge second;
    ColorRef color;
};

struct ValidationReport {
    std::vector<Conflict> conflicts;
    std::vector<Edge> unassigned;

    bool ok() const { return conflicts.empty() && unassigned.empty(); }
    std::string describe() const;
};

ValidationReport validate_coloring(std::span<const Edge> edges, const ColoringState& state);

}  // namespace onlinecolor
