#include "laryngen/synth.hpp"

#include <algorithm>

namespace laryngen {

namespace {

// Work bitmap over the scope rectangle.
class ScopeMap {
public:
    ScopeMap(Rect r) : r_(r), w_(r.y1 - r.y0 + 1), h_(r.x1 - r.x0 + 1), bits_(size_t(w_) * h_, 0) {}

    bool contains(Cell c) const { return r_.contains(c); }
    uint8_t& at(Cell c) { return bits_[size_t(c.x - r_.x0) * w_ + (c.y - r_.y0)]; }
    uint8_t at(Cell c) const { return bits_[size_t(c.x - r_.x0) * w_ + (c.y - r_.y0)]; }

private:
    Rect r_;
    int w_, h_;
    std::vector<uint8_t> bits_;
};

} // namespace

CellGrid rasterize_and_fill(const CellGrid& grid,
                            const std::vector<SubBlockRef>& selection, Cell center,
                            SemClass cls, SemClass placement_cls,
                            const FillScope& scope,
                            std::vector<Cell>* filled_cells) {
    const GridGeometry& g = grid.geometry();

    Rect bounds = scope.bounds;
    if (scope.max_x)
        bounds.x1 = std::min(bounds.x1, *scope.max_x);
    if (!bounds.contains(center))
        throw ContractError("fill center outside scope");

    ScopeMap blocked(bounds);
    for (SubBlockRef s : selection) {
        Rect r = g.subblock_rect(s);
        for (int x = std::max(r.x0, bounds.x0); x <= std::min(r.x1, bounds.x1); ++x)
            for (int y = std::max(r.y0, bounds.y0); y <= std::min(r.y1, bounds.y1); ++y)
                blocked.at({x, y}) = 1;
    }
    if (blocked.at(center))
        throw InfeasibleError("contour selection covers the center cell");

    static const int kSteps[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

    // Closure test: a flood stopped only by the contour must stay off the
    // scope boundary. The clipped row (scope.max_x) is the deliberately open
    // side of a semi-contour and does not count.
    {
        ScopeMap seen(bounds);
        std::vector<Cell> stack{center};
        seen.at(center) = 1;
        while (!stack.empty()) {
            Cell c = stack.back();
            stack.pop_back();
            bool on_edge = c.x == bounds.x0 || c.y == bounds.y0 || c.y == bounds.y1 ||
                           (c.x == bounds.x1 && !scope.max_x);
            if (on_edge)
                throw OpenContourError("contour is open: flood reached scope edge at (" +
                                       std::to_string(c.x) + "," + std::to_string(c.y) + ")");
            for (auto& d : kSteps) {
                Cell n{c.x + d[0], c.y + d[1]};
                if (!bounds.contains(n) || blocked.at(n) || seen.at(n))
                    continue;
                seen.at(n) = 1;
                stack.push_back(n);
            }
        }
    }

    // Actual fill: additionally confined to the placement class.
    CellGrid out = grid;
    std::vector<Cell> filled;

    for (SubBlockRef s : selection) {
        Rect r = g.subblock_rect(s);
        for (int x = r.x0; x <= r.x1; ++x) {
            for (int y = r.y0; y <= r.y1; ++y) {
                if (grid.at(x, y) == placement_cls) {
                    out.set(x, y, cls);
                    filled.push_back({x, y});
                }
            }
        }
    }

    if (grid.at(center) != placement_cls)
        throw ContractError("fill center does not hold the placement class");
    {
        ScopeMap seen(bounds);
        std::vector<Cell> stack{center};
        seen.at(center) = 1;
        while (!stack.empty()) {
            Cell c = stack.back();
            stack.pop_back();
            out.set(c, cls);
            filled.push_back(c);
            for (auto& d : kSteps) {
                Cell n{c.x + d[0], c.y + d[1]};
                if (!bounds.contains(n) || blocked.at(n) || seen.at(n) ||
                    grid.at(n) != placement_cls)
                    continue;
                seen.at(n) = 1;
                stack.push_back(n);
            }
        }
    }

    if (filled_cells) {
        std::sort(filled.begin(), filled.end());
        filled.erase(std::unique(filled.begin(), filled.end()), filled.end());
        *filled_cells = std::move(filled);
    }
    return out;
}

} // namespace laryngen
