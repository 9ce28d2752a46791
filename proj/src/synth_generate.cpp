#include "laryngen/synth.hpp"

#include <algorithm>
#include <map>

namespace laryngen {

namespace {

struct StageTally {
    std::map<std::string, int> failures;
    std::string last_error;

    void note(const std::string& stage, const std::string& what) {
        ++failures[stage];
        last_error = stage + ": " + what;
    }

    std::string summary() const {
        std::string s;
        for (const auto& [stage, n] : failures)
            s += " " + stage + "=" + std::to_string(n);
        return s;
    }
};

[[noreturn]] void give_up(const char* what, int retries, const StageTally& tally) {
    throw InfeasibleError(std::string(what) + " generation failed after " +
                          std::to_string(retries) + " attempts; failures per stage:" +
                          tally.summary() + "; last: " + tally.last_error);
}

bool tool_cell_ok(const ObjectSpec& spec, SemClass c) {
    if (spec.placement_union)
        return c == SemClass::VocalFolds || c == SemClass::GlottalSpace;
    return c == spec.placement_cls;
}

} // namespace

std::pair<CellGrid, ObjectInstance> generate_pathology(const CellGrid& grid,
                                                       const ObjectSpec& spec,
                                                       const SearchOptions& opt,
                                                       uint64_t seed) {
    const GridGeometry& g = grid.geometry();
    StageTally tally;
    for (int attempt = 0; attempt < opt.retries; ++attempt) {
        uint64_t attempt_seed = sub_seed(seed, attempt);
        Rng rng(attempt_seed);
        std::string stage = "choose_block";
        try {
            BlockRef block = choose_block(grid, spec.placement_cls, spec.block_fraction, rng);
            Rect blk = g.block_rect(block);

            stage = "choose_center";
            Cell center = choose_center(grid, block, spec.center_margin,
                                        spec.placement_cls, rng);

            stage = "guess_contour_pivots";
            PivotScope pscope{blk, false};
            std::vector<ContourPivot> pivots =
                guess_contour_pivots(grid, center, spec, pscope, rng);

            stage = "connect_pivots";
            ConnectScope cscope{spec.placement_cls, block, true};
            PathSelection sel = connect_pivots(grid, pivots, spec, cscope, opt, rng);

            stage = "rasterize_and_fill";
            FillScope fscope{blk, std::nullopt};
            ObjectInstance inst;
            CellGrid out = rasterize_and_fill(grid, sel.chosen, center,
                                              SemClass::Pathology, spec.placement_cls,
                                              fscope, &inst.filled_cells);
            inst.spec = spec;
            inst.chosen_block = block;
            inst.center = center;
            inst.pivots = std::move(pivots);
            inst.selection = std::move(sel);
            inst.seed = attempt_seed;
            return {std::move(out), std::move(inst)};
        } catch (const InfeasibleError& e) {
            tally.note(stage, e.what());
        } catch (const OpenContourError& e) {
            tally.note(stage, e.what());
        }
    }
    give_up("pathology", opt.retries, tally);
}

namespace {

// Center candidates for the intubation: placement cells in the lowest
// `bottom_band` rows of the glottal region whose margin square is pure and
// whose column runs unbroken to the bottom border (so the tube reaches it).
std::vector<Cell> intubation_center_candidates(const CellGrid& grid,
                                               const ObjectSpec& spec) {
    const GridGeometry& g = grid.geometry();
    const SemClass place = spec.placement_cls;

    int lowest = -1;
    for (int x = g.height - 1; x >= 0 && lowest < 0; --x)
        for (int y = 0; y < g.width; ++y)
            if (grid.at(x, y) == place) {
                lowest = x;
                break;
            }
    if (lowest < 0)
        return {};

    // Columns whose placement run is unbroken from a given row to the border.
    std::vector<int> reach_from(g.width, g.height); // min row with border access
    for (int y = 0; y < g.width; ++y) {
        int x = g.height - 1;
        if (grid.at(x, y) != place)
            continue;
        while (x > 0 && grid.at(x - 1, y) == place)
            --x;
        reach_from[y] = x;
    }

    const int m = spec.center_margin;
    int band_lo = std::max(0, lowest - spec.bottom_band + 1);
    std::vector<Cell> out;
    for (int x = band_lo; x <= lowest; ++x) {
        if (x - m < 0 || x + m >= g.height)
            continue;
        for (int y = 0; y < g.width; ++y) {
            if (grid.at(x, y) != place || reach_from[y] > x)
                continue;
            if (y - m < 0 || y + m >= g.width)
                continue;
            bool pure = true;
            for (int i = x - m; i <= x + m && pure; ++i)
                for (int j = y - m; j <= y + m && pure; ++j)
                    pure = grid.at(i, j) == place;
            if (pure)
                out.push_back({x, y});
        }
    }
    return out;
}

} // namespace

std::pair<CellGrid, ObjectInstance> generate_intubation(const CellGrid& grid,
                                                        const ObjectSpec& spec,
                                                        const SearchOptions& opt,
                                                        uint64_t seed) {
    const GridGeometry& g = grid.geometry();

    bool border_access = false;
    for (int y = 0; y < g.width && !border_access; ++y)
        border_access = grid.at(g.height - 1, y) == spec.placement_cls;
    if (!border_access)
        throw InfeasibleError("no glottal-space access to the bottom border");

    std::vector<Cell> candidates = intubation_center_candidates(grid, spec);
    if (candidates.empty())
        throw InfeasibleError("no intubation center candidate in the bottom band");

    StageTally tally;
    for (int attempt = 0; attempt < opt.retries; ++attempt) {
        uint64_t attempt_seed = sub_seed(seed, attempt);
        Rng rng(attempt_seed);
        std::string stage = "choose_center";
        try {
            Cell center = rng.pick(candidates);

            stage = "guess_contour_pivots";
            PivotScope pscope{Rect{0, g.height - 1, 0, g.width - 1}, true};
            std::vector<ContourPivot> pivots =
                guess_contour_pivots(grid, center, spec, pscope, rng);

            stage = "connect_pivots";
            ConnectScope cscope{spec.placement_cls, std::nullopt, false};
            PathSelection sel = connect_pivots(grid, pivots, spec, cscope, opt, rng);

            stage = "rasterize_and_fill";
            FillScope fscope{Rect{0, g.height - 1, 0, g.width - 1}, center.x};
            ObjectInstance inst;
            CellGrid out = rasterize_and_fill(grid, sel.chosen, center,
                                              SemClass::Intubation, spec.placement_cls,
                                              fscope, &inst.filled_cells);

            // Extend straight down to the border across the contour's column
            // span; placement cells only.
            int span_lo = pivots[0].position.y, span_hi = pivots[0].position.y;
            for (const ContourPivot& p : pivots) {
                span_lo = std::min(span_lo, p.position.y);
                span_hi = std::max(span_hi, p.position.y);
            }
            for (int y = span_lo; y <= span_hi; ++y) {
                for (int x = center.x + 1; x < g.height; ++x) {
                    if (grid.at(x, y) == spec.placement_cls) {
                        out.set(x, y, SemClass::Intubation);
                        inst.filled_cells.push_back({x, y});
                    }
                }
            }
            std::sort(inst.filled_cells.begin(), inst.filled_cells.end());
            inst.filled_cells.erase(
                std::unique(inst.filled_cells.begin(), inst.filled_cells.end()),
                inst.filled_cells.end());

            inst.spec = spec;
            inst.chosen_block = cell_to_refs(g, center.x, center.y).first;
            inst.center = center;
            inst.pivots = std::move(pivots);
            inst.selection = std::move(sel);
            inst.seed = attempt_seed;
            return {std::move(out), std::move(inst)};
        } catch (const InfeasibleError& e) {
            tally.note(stage, e.what());
        } catch (const OpenContourError& e) {
            tally.note(stage, e.what());
        }
    }
    give_up("intubation", opt.retries, tally);
}

std::pair<CellGrid, ObjectInstance> generate_tool(const CellGrid& grid,
                                                  const ObjectSpec& spec,
                                                  const SearchOptions& opt,
                                                  uint64_t seed) {
    const GridGeometry& g = grid.geometry();

    std::vector<Cell> border;
    for (int y = 0; y < g.width; ++y) {
        if (tool_cell_ok(spec, grid.at(0, y)))
            border.push_back({0, y});
        if (tool_cell_ok(spec, grid.at(g.height - 1, y)))
            border.push_back({g.height - 1, y});
    }
    for (int x = 1; x < g.height - 1; ++x) {
        if (tool_cell_ok(spec, grid.at(x, 0)))
            border.push_back({x, 0});
        if (tool_cell_ok(spec, grid.at(x, g.width - 1)))
            border.push_back({x, g.width - 1});
    }
    std::sort(border.begin(), border.end());
    if (border.empty())
        throw InfeasibleError("no eligible border cell for the surgical tool");

    StageTally tally;
    for (int attempt = 0; attempt < opt.retries; ++attempt) {
        uint64_t attempt_seed = sub_seed(seed, attempt);
        Rng rng(attempt_seed);
        std::string stage = "choose_entry";
        try {
            Cell entry = rng.pick(border);

            stage = "choose_tip";
            std::vector<Cell> tips;
            int x_lo = std::max(1, entry.x - spec.max_length);
            int x_hi = std::min(g.height - 2, entry.x + spec.max_length);
            int y_lo = std::max(1, entry.y - spec.max_length);
            int y_hi = std::min(g.width - 2, entry.y + spec.max_length);
            for (int x = x_lo; x <= x_hi; ++x) {
                for (int y = y_lo; y <= y_hi; ++y) {
                    int d = chebyshev(entry, {x, y});
                    if (d < spec.min_length || d > spec.max_length)
                        continue;
                    if (tool_cell_ok(spec, grid.at(x, y)))
                        tips.push_back({x, y});
                }
            }
            if (tips.empty())
                throw InfeasibleError("no interior tip cell in length range from (" +
                                      std::to_string(entry.x) + "," +
                                      std::to_string(entry.y) + ")");
            Cell tip = rng.pick(tips);

            stage = "rasterize_rod";
            const int w = spec.half_width;
            std::vector<Cell> line = raster_segment(entry, tip);
            CellGrid out = grid;
            std::vector<uint8_t> stamped(grid.size(), 0);
            for (Cell c : line) {
                for (int x = std::max(0, c.x - w); x <= std::min(g.height - 1, c.x + w); ++x)
                    for (int y = std::max(0, c.y - w); y <= std::min(g.width - 1, c.y + w); ++y)
                        stamped[static_cast<size_t>(x) * g.width + y] = 1;
            }
            ObjectInstance inst;
            for (int x = 0; x < g.height; ++x) {
                for (int y = 0; y < g.width; ++y) {
                    if (stamped[static_cast<size_t>(x) * g.width + y] &&
                        tool_cell_ok(spec, grid.at(x, y))) {
                        out.set(x, y, SemClass::SurgicalTool);
                        inst.filled_cells.push_back({x, y});
                    }
                }
            }
            inst.spec = spec;
            inst.chosen_block = cell_to_refs(g, entry.x, entry.y).first;
            inst.center = entry;
            inst.rod_entry = entry;
            inst.rod_tip = tip;
            inst.seed = attempt_seed;
            return {std::move(out), std::move(inst)};
        } catch (const InfeasibleError& e) {
            tally.note(stage, e.what());
        }
    }
    give_up("surgical tool", opt.retries, tally);
}

std::pair<CellGrid, ObjectInstance> generate_object(const CellGrid& grid,
                                                    const ObjectSpec& spec,
                                                    const SearchOptions& opt,
                                                    uint64_t seed) {
    switch (spec.cls) {
        case SemClass::Pathology: return generate_pathology(grid, spec, opt, seed);
        case SemClass::Intubation: return generate_intubation(grid, spec, opt, seed);
        case SemClass::SurgicalTool: return generate_tool(grid, spec, opt, seed);
        default:
            throw ContractError(std::string("'") + class_name(spec.cls) +
                                "' is not a generatable class");
    }
}

} // namespace laryngen
