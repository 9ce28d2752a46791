#include "laryngen/synth.hpp"

#include <cmath>

namespace laryngen {

const char* line_kind_name(LineKind k) {
    switch (k) {
        case LineKind::MainDiag: return "main_diag";
        case LineKind::SecDiag: return "sec_diag";
        case LineKind::Row: return "row";
        case LineKind::Col: return "col";
    }
    return "?";
}

bool line_kind_from_name(const std::string& name, LineKind& out) {
    for (LineKind k : {LineKind::MainDiag, LineKind::SecDiag, LineKind::Row, LineKind::Col}) {
        if (name == line_kind_name(k)) {
            out = k;
            return true;
        }
    }
    return false;
}

BlockRef choose_block(const CellGrid& grid, SemClass placement_cls,
                      double min_fraction, Rng& rng) {
    std::vector<BlockRef> blocks = eligible_blocks(grid, placement_cls, min_fraction);
    if (blocks.empty())
        throw InfeasibleError(std::string("no block is at least ") +
                              std::to_string(min_fraction) + " " +
                              class_name(placement_cls));
    return rng.pick(blocks);
}

Cell choose_center(const CellGrid& grid, BlockRef block, int margin,
                   SemClass placement_cls, Rng& rng) {
    const GridGeometry& g = grid.geometry();
    Rect blk = g.block_rect(block);
    const int bd = g.block_dim;

    // 2D prefix sums of the placement indicator over the block, so each
    // margin-square purity test is O(1).
    std::vector<int> pre((bd + 1) * (bd + 1), 0);
    auto at_pre = [&](int i, int j) -> int& { return pre[i * (bd + 1) + j]; };
    for (int i = 0; i < bd; ++i)
        for (int j = 0; j < bd; ++j)
            at_pre(i + 1, j + 1) = at_pre(i, j + 1) + at_pre(i + 1, j) - at_pre(i, j) +
                                   (grid.at(blk.x0 + i, blk.y0 + j) == placement_cls);

    const int side = 2 * margin + 1;
    std::vector<Cell> candidates;
    for (int i = margin; i < bd - margin; ++i) {
        for (int j = margin; j < bd - margin; ++j) {
            int sum = at_pre(i + margin + 1, j + margin + 1) -
                      at_pre(i - margin, j + margin + 1) -
                      at_pre(i + margin + 1, j - margin) + at_pre(i - margin, j - margin);
            if (sum == side * side)
                candidates.push_back({blk.x0 + i, blk.y0 + j});
        }
    }
    if (candidates.empty())
        throw InfeasibleError("block " + std::to_string(block.idb) +
                              " has no center candidate at margin " +
                              std::to_string(margin));
    return rng.pick(candidates);
}

namespace {

struct Direction {
    int dx8 = 0, dy8 = 0; // exact unit step for the 8 compass directions
    double angle = 0.0;   // radians ccw from east, for general pivot counts
    bool compass = false;
};

// Pivot offset at Chebyshev radius d.
Cell offset_at(const Direction& dir, Cell center, int d) {
    if (dir.compass)
        return {center.x + dir.dx8 * d, center.y + dir.dy8 * d};
    double s = std::sin(dir.angle), c = std::cos(dir.angle);
    double m = std::max(std::abs(s), std::abs(c));
    return {center.x - static_cast<int>(std::llround(s * d / m)),
            center.y + static_cast<int>(std::llround(c * d / m))};
}

LineKind kind_of(const Direction& dir) {
    // Nearest compass bucket; exact for the axis/diagonal directions.
    int bucket;
    if (dir.compass) {
        static const int map_dx[3][3] = {
            // dx = -1, 0, 1 rows; dy = -1, 0, 1 cols
            {3, 2, 1},
            {4, 8, 0},
            {5, 6, 7},
        };
        bucket = map_dx[dir.dx8 + 1][dir.dy8 + 1];
    } else {
        bucket = static_cast<int>(std::llround(dir.angle / (M_PI / 4))) % 8;
    }
    switch (bucket) {
        case 0: case 4: return LineKind::Row;     // E, W
        case 2: case 6: return LineKind::Col;     // N, S
        case 1: case 5: return LineKind::SecDiag; // NE, SW
        default: return LineKind::MainDiag;       // NW, SE
    }
}

std::vector<Direction> directions(int count) {
    std::vector<Direction> out;
    out.reserve(count);
    if (count == 8) {
        static const int d8[8][2] = {{0, 1},  {-1, 1}, {-1, 0}, {-1, -1},
                                     {0, -1}, {1, -1}, {1, 0},  {1, 1}};
        for (auto& d : d8)
            out.push_back({d[0], d[1], 0.0, true});
    } else if (count == 4) {
        static const int d4[4][2] = {{0, 1}, {-1, 0}, {0, -1}, {1, 0}};
        for (auto& d : d4)
            out.push_back({d[0], d[1], 0.0, true});
    } else {
        for (int k = 0; k < count; ++k)
            out.push_back({0, 0, 2.0 * M_PI * k / count, false});
    }
    return out;
}

bool points_up_or_level(const Direction& dir, Cell center, int d) {
    return offset_at(dir, center, std::max(d, 1)).x <= center.x;
}

} // namespace

std::vector<ContourPivot> guess_contour_pivots(const CellGrid& grid, Cell center,
                                               const ObjectSpec& spec,
                                               const PivotScope& scope, Rng& rng) {
    std::vector<ContourPivot> pivots;
    int idfp = 0;
    for (const Direction& dir : directions(spec.pivot_count)) {
        if (scope.upper_half_only && !points_up_or_level(dir, center, spec.min_pivot_dist))
            continue;

        // Largest d whose whole ray stays on the placement class inside the clip.
        int upper = 0;
        for (int d = 1; d <= spec.max_pivot_dist; ++d) {
            Cell c = offset_at(dir, center, d);
            if (!scope.clip.contains(c) || grid.at(c) != spec.placement_cls)
                break;
            upper = d;
        }
        if (upper < spec.min_pivot_dist)
            throw InfeasibleError("pivot half-line " + std::to_string(idfp) +
                                  " has empty feasible range at center (" +
                                  std::to_string(center.x) + "," +
                                  std::to_string(center.y) + ")");
        int d = static_cast<int>(rng.range(spec.min_pivot_dist, upper));
        pivots.push_back({idfp, offset_at(dir, center, d), kind_of(dir)});
        ++idfp;
    }
    return pivots;
}

Rect bounding_rect(Cell p, Cell q, int padding, const Rect* clip) {
    Rect r{std::min(p.x, q.x) - padding, std::max(p.x, q.x) + padding,
           std::min(p.y, q.y) - padding, std::max(p.y, q.y) + padding};
    if (clip) {
        r.x0 = std::max(r.x0, clip->x0);
        r.x1 = std::min(r.x1, clip->x1);
        r.y0 = std::max(r.y0, clip->y0);
        r.y1 = std::min(r.y1, clip->y1);
    }
    return r;
}

} // namespace laryngen
