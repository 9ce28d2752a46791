#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "laryngen/grid.hpp"
#include "laryngen/rng.hpp"
#include "laryngen/scene.hpp"

namespace laryngen {

// Which line through the center a pivot sits on. With 8 pivots there are
// exactly two per kind: main diagonal (NW/SE), secondary diagonal (NE/SW),
// row (E/W), column (N/S).
enum class LineKind { MainDiag, SecDiag, Row, Col };

const char* line_kind_name(LineKind k);
bool line_kind_from_name(const std::string& name, LineKind& out);

struct ContourPivot {
    int idfp = 0; // counterclockwise order, 0 = east
    Cell position;
    LineKind line_kind = LineKind::Row;

    bool operator==(const ContourPivot&) const = default;
};

// The sub-blocks the search selected for re-coloring, with their soft cost.
struct PathSelection {
    std::vector<SubBlockRef> chosen; // sorted, unique
    int cost = 0;

    bool operator==(const PathSelection&) const = default;
};

struct ObjectInstance {
    ObjectSpec spec;
    BlockRef chosen_block;
    Cell center;
    std::vector<ContourPivot> pivots;
    PathSelection selection;
    std::vector<Cell> filled_cells; // sorted; every one held the placement class
    uint64_t seed = 0;              // attempt seed that produced this instance

    // Surgical tool rod; unused for the contour classes.
    Cell rod_entry;
    Cell rod_tip;
};

struct SearchOptions {
    bool exhaustive = false; // globally minimal per-pair cost
    Adjacency adjacency = Adjacency::EightWay;
    bool column_penalty = false; // symmetric column form of the soft cost
    int exhaustive_bound = 20;   // enumerate when the region is this small
    size_t node_budget = 200000; // heuristic best-first cap per pair
    int retries = 32;            // resample budget per object
};

// --- guessing stages ---

// Uniformly random eligible block.
BlockRef choose_block(const CellGrid& grid, SemClass placement_cls,
                      double min_fraction, Rng& rng);

// Uniformly random block cell whose Chebyshev `margin` square lies inside
// the block and holds only placement_cls.
Cell choose_center(const CellGrid& grid, BlockRef block, int margin,
                   SemClass placement_cls, Rng& rng);

struct PivotScope {
    Rect clip;                   // pivots (and their rays) stay inside
    bool upper_half_only = false; // intubation: directions with dx <= 0
};

// One pivot per half-line at a uniformly random feasible distance. The ray
// from the center to each pivot must stay on placement_cls and inside the
// clip rect; a half-line with an empty [min,max] range is infeasible.
std::vector<ContourPivot> guess_contour_pivots(const CellGrid& grid, Cell center,
                                               const ObjectSpec& spec,
                                               const PivotScope& scope, Rng& rng);

// Inclusive min/max rectangle over the two cells, dilated by `padding` and
// clipped to `clip` when given.
Rect bounding_rect(Cell p, Cell q, int padding = 0,
                   const Rect* clip = nullptr);

// --- path search ---

// Soft cost: number of unordered non-adjacent pairs whose cell-row bands
// overlap (plus the symmetric column form when enabled). Weight 1 per pair.
int path_cost(const GridGeometry& g, std::span<const SubBlockRef> selection,
              Adjacency adj = Adjacency::EightWay, bool column_penalty = false);

// Sub-blocks intersecting `rect` that consist wholly of placement_cls cells
// (optionally restricted to one block). Sorted by (idb, idsb).
std::vector<SubBlockRef> guessable_subblocks(const CellGrid& grid, Rect rect,
                                             SemClass placement_cls,
                                             std::optional<BlockRef> block);

struct ConnectScope {
    SemClass placement_cls = SemClass::VocalFolds;
    std::optional<BlockRef> block; // pathology: selection confined to the chosen block
    bool cyclic = true;            // ring (pathology) vs open chain (intubation)
};

// For each consecutive pivot pair, selects a connected set of guessable
// sub-blocks containing both pivot sub-blocks, minimising the soft cost;
// returns the union with its recomputed total cost.
PathSelection connect_pivots(const CellGrid& grid,
                             const std::vector<ContourPivot>& pivots,
                             const ObjectSpec& spec, const ConnectScope& scope,
                             const SearchOptions& opt, Rng& rng);

// --- rasterisation ---

struct FillScope {
    Rect bounds;                // closure test fails if the flood reaches this boundary
    std::optional<int> max_x;   // clip flood to rows <= max_x; that side is open
};

// Recolors every placement-class cell of the selected sub-blocks, plus every
// cell 4-connected-reachable from the center without entering a selected
// sub-block or leaving the placement class. Raises OpenContourError if the
// contour does not enclose the center within the scope.
CellGrid rasterize_and_fill(const CellGrid& grid,
                            const std::vector<SubBlockRef>& selection, Cell center,
                            SemClass cls, SemClass placement_cls,
                            const FillScope& scope,
                            std::vector<Cell>* filled_cells = nullptr);

// --- per-class generators (deterministic in (grid, spec, seed)) ---

std::pair<CellGrid, ObjectInstance> generate_pathology(const CellGrid& grid,
                                                       const ObjectSpec& spec,
                                                       const SearchOptions& opt,
                                                       uint64_t seed);

std::pair<CellGrid, ObjectInstance> generate_intubation(const CellGrid& grid,
                                                        const ObjectSpec& spec,
                                                        const SearchOptions& opt,
                                                        uint64_t seed);

std::pair<CellGrid, ObjectInstance> generate_tool(const CellGrid& grid,
                                                  const ObjectSpec& spec,
                                                  const SearchOptions& opt,
                                                  uint64_t seed);

// Dispatch on spec.cls.
std::pair<CellGrid, ObjectInstance> generate_object(const CellGrid& grid,
                                                    const ObjectSpec& spec,
                                                    const SearchOptions& opt,
                                                    uint64_t seed);

// --- oracle ---

// Minimum soft cost over ALL subsets of the region that contain both pivot
// sub-blocks and are adjacency-connected, by straight subset enumeration.
// Independent of the search path above; used to check it. The region may
// hold at most 20 sub-blocks.
int brute_force_min_cost(const GridGeometry& g, Cell pivot_a, Cell pivot_b,
                         std::span<const SubBlockRef> guessable_region,
                         Adjacency adj = Adjacency::EightWay,
                         bool column_penalty = false);

} // namespace laryngen
