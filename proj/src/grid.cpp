#include "laryngen/grid.hpp"

#include <algorithm>
#include <cmath>

#include "laryngen/kernels.hpp"

namespace laryngen {

namespace {

const char* kClassNames[kNumClasses] = {
    "void", "vocal_folds", "other_tissue", "glottal_space",
    "pathology", "surgical_tool", "intubation",
};

} // namespace

const char* class_name(SemClass c) {
    return kClassNames[static_cast<size_t>(c)];
}

bool class_from_name(const std::string& name, SemClass& out) {
    for (size_t i = 0; i < kNumClasses; ++i) {
        if (name == kClassNames[i]) {
            out = static_cast<SemClass>(i);
            return true;
        }
    }
    return false;
}

void GridGeometry::validate() const {
    if (width <= 0 || height <= 0 || block_dim <= 0 || sub_dim <= 0)
        throw ContractError("grid geometry dimensions must be positive");
    if (width % block_dim != 0 || height % block_dim != 0)
        throw ContractError("block_dim " + std::to_string(block_dim) +
                            " does not divide " + std::to_string(width) + "x" +
                            std::to_string(height));
    if (block_dim % sub_dim != 0)
        throw ContractError("sub_dim " + std::to_string(sub_dim) +
                            " does not divide block_dim " + std::to_string(block_dim));
}

Rect GridGeometry::block_rect(BlockRef b) const {
    if (!valid_block(b))
        throw BoundsError("block id " + std::to_string(b.idb) + " out of range");
    int brow = b.idb / blocks_per_row();
    int bcol = b.idb % blocks_per_row();
    return {brow * block_dim, (brow + 1) * block_dim - 1,
            bcol * block_dim, (bcol + 1) * block_dim - 1};
}

Rect GridGeometry::subblock_rect(SubBlockRef s) const {
    if (!valid_subblock(s))
        throw BoundsError("sub-block (" + std::to_string(s.idb) + "," +
                          std::to_string(s.idsb) + ") out of range");
    Rect blk = block_rect({s.idb});
    int side = subs_per_block_side();
    int srow = s.idsb / side;
    int scol = s.idsb % side;
    return {blk.x0 + srow * sub_dim, blk.x0 + (srow + 1) * sub_dim - 1,
            blk.y0 + scol * sub_dim, blk.y0 + (scol + 1) * sub_dim - 1};
}

SubBlockRef GridGeometry::subref_from_global(int gsx, int gsy) const {
    if (gsx < 0 || gsx >= global_subs_x() || gsy < 0 || gsy >= global_subs_y())
        throw BoundsError("global sub-block (" + std::to_string(gsx) + "," +
                          std::to_string(gsy) + ") out of range");
    int subs_per_blk = block_dim / sub_dim;
    int brow = gsx / subs_per_blk;
    int bcol = gsy / subs_per_blk;
    int srow = gsx % subs_per_blk;
    int scol = gsy % subs_per_blk;
    return {brow * blocks_per_row() + bcol, srow * subs_per_blk + scol};
}

void GridGeometry::global_from_subref(SubBlockRef s, int& gsx, int& gsy) const {
    Rect r = subblock_rect(s);
    gsx = r.x0 / sub_dim;
    gsy = r.y0 / sub_dim;
}

CellGrid::CellGrid(GridGeometry g, SemClass fill) : geom_(g) {
    geom_.validate();
    cells_.assign(static_cast<size_t>(geom_.width) * geom_.height,
                  static_cast<uint8_t>(fill));
}

std::pair<BlockRef, SubBlockRef> cell_to_refs(const GridGeometry& g, int x, int y) {
    if (!g.cell_in_bounds({x, y}))
        throw BoundsError("cell (" + std::to_string(x) + "," + std::to_string(y) +
                          ") out of range");
    int idb = (x / g.block_dim) * g.blocks_per_row() + (y / g.block_dim);
    int lx = x % g.block_dim;
    int ly = y % g.block_dim;
    int side = g.subs_per_block_side();
    int idsb = (lx / g.sub_dim) * side + (ly / g.sub_dim);
    return {BlockRef{idb}, SubBlockRef{idb, idsb}};
}

std::vector<Cell> subblock_cells(const GridGeometry& g, SubBlockRef s) {
    Rect r = g.subblock_rect(s);
    std::vector<Cell> cells;
    cells.reserve(static_cast<size_t>(g.sub_dim) * g.sub_dim);
    for (int x = r.x0; x <= r.x1; ++x)
        for (int y = r.y0; y <= r.y1; ++y)
            cells.push_back({x, y});
    return cells;
}

std::vector<SubBlockRef> adjacent_subblocks(const GridGeometry& g, SubBlockRef s,
                                            Adjacency adj) {
    int gsx, gsy;
    g.global_from_subref(s, gsx, gsy);
    std::vector<SubBlockRef> out;
    out.reserve(8);
    for (int dx = -1; dx <= 1; ++dx) {
        for (int dy = -1; dy <= 1; ++dy) {
            if (dx == 0 && dy == 0)
                continue;
            if (adj == Adjacency::FourWay && dx != 0 && dy != 0)
                continue;
            int nx = gsx + dx, ny = gsy + dy;
            if (nx < 0 || nx >= g.global_subs_x() || ny < 0 || ny >= g.global_subs_y())
                continue;
            out.push_back(g.subref_from_global(nx, ny));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool subblocks_adjacent(const GridGeometry& g, SubBlockRef a, SubBlockRef b,
                        Adjacency adj) {
    if (a == b)
        return false;
    int ax, ay, bx, by;
    g.global_from_subref(a, ax, ay);
    g.global_from_subref(b, bx, by);
    int dx = std::abs(ax - bx), dy = std::abs(ay - by);
    if (adj == Adjacency::FourWay)
        return dx + dy == 1;
    return dx <= 1 && dy <= 1;
}

std::vector<BlockRef> eligible_blocks(const CellGrid& grid, SemClass cls,
                                      double min_fraction) {
    const GridGeometry& g = grid.geometry();
    if (min_fraction <= 0.0 || min_fraction > 1.0)
        throw ContractError("min_fraction must be in (0, 1]");

    const size_t block_cells = static_cast<size_t>(g.block_dim) * g.block_dim;
    const uint8_t target = static_cast<uint8_t>(cls);
    std::vector<BlockRef> out;
    for (int idb = 0; idb < g.block_count(); ++idb) {
        Rect r = g.block_rect({idb});
        size_t n = 0;
        for (int x = r.x0; x <= r.x1; ++x) {
            const uint8_t* row = grid.data() + static_cast<size_t>(x) * g.width + r.y0;
            n += kernels::count_eq(row, static_cast<size_t>(g.block_dim), target);
        }
        if (static_cast<double>(n) >= min_fraction * static_cast<double>(block_cells))
            out.push_back({idb});
    }
    return out;
}

std::vector<Cell> raster_segment(Cell p, Cell q) {
    std::vector<Cell> line;
    int dx = std::abs(q.x - p.x), dy = std::abs(q.y - p.y);
    int sx = p.x < q.x ? 1 : -1;
    int sy = p.y < q.y ? 1 : -1;
    int err = dx - dy;
    Cell c = p;
    while (true) {
        line.push_back(c);
        if (c == q)
            break;
        int e2 = 2 * err;
        if (e2 > -dy) {
            err -= dy;
            c.x += sx;
        }
        if (e2 < dx) {
            err += dx;
            c.y += sy;
        }
    }
    return line;
}

} // namespace laryngen
