#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "laryngen/errors.hpp"

namespace laryngen {

// The seven semantic classes of the label maps. Order is the canonical
// class index (used for palette rows and histogram slots).
enum class SemClass : uint8_t {
    Void = 0,
    VocalFolds,
    OtherTissue,
    GlottalSpace,
    Pathology,
    SurgicalTool,
    Intubation,
};

inline constexpr size_t kNumClasses = 7;

const char* class_name(SemClass c);
// Returns true and sets `out` if `name` is a known class keyword.
bool class_from_name(const std::string& name, SemClass& out);

struct Cell {
    int x = 0; // row, 0 at top
    int y = 0; // column

    bool operator==(const Cell&) const = default;
    auto operator<=>(const Cell&) const = default;
};

inline int chebyshev(Cell a, Cell b) {
    int dx = a.x > b.x ? a.x - b.x : b.x - a.x;
    int dy = a.y > b.y ? a.y - b.y : b.y - a.y;
    return dx > dy ? dx : dy;
}

struct BlockRef {
    int idb = 0;
    bool operator==(const BlockRef&) const = default;
    auto operator<=>(const BlockRef&) const = default;
};

struct SubBlockRef {
    int idb = 0;
    int idsb = 0;
    bool operator==(const SubBlockRef&) const = default;
    auto operator<=>(const SubBlockRef&) const = default;
};

// Axis-aligned, inclusive cell rectangle.
struct Rect {
    int x0 = 0, x1 = 0; // rows, x0 <= x1
    int y0 = 0, y1 = 0; // cols, y0 <= y1

    bool contains(Cell c) const {
        return c.x >= x0 && c.x <= x1 && c.y >= y0 && c.y <= y1;
    }
    bool operator==(const Rect&) const = default;
};

enum class Adjacency { EightWay, FourWay };

// Partitioning parameters. block_dim must divide both image dimensions and
// sub_dim must divide block_dim.
struct GridGeometry {
    int width = 512;     // columns
    int height = 512;    // rows
    int block_dim = 64;
    int sub_dim = 8;

    void validate() const;

    int blocks_per_row() const { return width / block_dim; }   // across columns
    int blocks_per_col() const { return height / block_dim; }  // down rows
    int block_count() const { return blocks_per_row() * blocks_per_col(); }

    int subs_per_block_side() const { return block_dim / sub_dim; }
    int subs_per_block() const { return subs_per_block_side() * subs_per_block_side(); }

    // Global sub-block lattice (sub-blocks tile the whole grid).
    int global_subs_x() const { return height / sub_dim; } // sub-rows
    int global_subs_y() const { return width / sub_dim; }  // sub-cols

    bool cell_in_bounds(Cell c) const {
        return c.x >= 0 && c.x < height && c.y >= 0 && c.y < width;
    }

    Rect block_rect(BlockRef b) const;
    Rect subblock_rect(SubBlockRef s) const;

    // Row-major global sub-block coordinates <-> refs.
    SubBlockRef subref_from_global(int gsx, int gsy) const;
    void global_from_subref(SubBlockRef s, int& gsx, int& gsy) const;

    bool valid_block(BlockRef b) const { return b.idb >= 0 && b.idb < block_count(); }
    bool valid_subblock(SubBlockRef s) const {
        return valid_block({s.idb}) && s.idsb >= 0 && s.idsb < subs_per_block();
    }

    bool operator==(const GridGeometry&) const = default;
};

// Dense label matrix, row 0 at top, indexed (x=row, y=column).
class CellGrid {
public:
    CellGrid() = default;
    CellGrid(GridGeometry g, SemClass fill = SemClass::Void);

    const GridGeometry& geometry() const { return geom_; }

    SemClass at(Cell c) const { return static_cast<SemClass>(cells_[index(c)]); }
    SemClass at(int x, int y) const { return at({x, y}); }
    void set(Cell c, SemClass v) { cells_[index(c)] = static_cast<uint8_t>(v); }
    void set(int x, int y, SemClass v) { set({x, y}, v); }

    // Raw class bytes, row-major. Kernel-facing.
    const uint8_t* data() const { return cells_.data(); }
    uint8_t* data() { return cells_.data(); }
    size_t size() const { return cells_.size(); }

    bool operator==(const CellGrid&) const = default;

private:
    size_t index(Cell c) const {
        if (!geom_.cell_in_bounds(c))
            throw BoundsError("cell (" + std::to_string(c.x) + "," + std::to_string(c.y) +
                              ") outside " + std::to_string(geom_.height) + "x" +
                              std::to_string(geom_.width) + " grid");
        return static_cast<size_t>(c.x) * geom_.width + c.y;
    }

    GridGeometry geom_;
    std::vector<uint8_t> cells_;
};

// Block and sub-block ids of the cell at (x, y), row-major convention:
// idb = (x / block_dim) * (width / block_dim) + y / block_dim, and idsb the
// same formula over in-block coordinates with sub_dim.
std::pair<BlockRef, SubBlockRef> cell_to_refs(const GridGeometry& g, int x, int y);

// All sub_dim^2 cells of a sub-block, row-major.
std::vector<Cell> subblock_cells(const GridGeometry& g, SubBlockRef s);

// Sub-blocks whose rectangle touches s's rectangle (edge or corner for
// EightWay, edge only for FourWay), including across block boundaries.
// Never contains s. Sorted by (idb, idsb).
std::vector<SubBlockRef> adjacent_subblocks(const GridGeometry& g, SubBlockRef s,
                                            Adjacency adj = Adjacency::EightWay);

bool subblocks_adjacent(const GridGeometry& g, SubBlockRef a, SubBlockRef b,
                        Adjacency adj = Adjacency::EightWay);

// Blocks whose fraction of `cls` cells is at least min_fraction, ascending idb.
std::vector<BlockRef> eligible_blocks(const CellGrid& grid, SemClass cls,
                                      double min_fraction = 1.0);

// Cells of the discretised segment p..q (Bresenham). Shared geometric
// plumbing: generators and the verifier rasterise rod segments through this
// one definition.
std::vector<Cell> raster_segment(Cell p, Cell q);

} // namespace laryngen
