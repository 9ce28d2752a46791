#include "laryngen/verify.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <limits>

#include "laryngen/image_io.hpp"

namespace laryngen {

namespace {

struct Checker {
    VerificationReport& report;

    void add(const std::string& name, bool pass, const std::string& detail = "") {
        report.constraints.push_back({name, pass, pass ? "" : detail});
    }
};

std::string cell_str(Cell c) {
    return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

bool record_placement_ok(const ObjectRecord& r, SemClass old_cls) {
    if (r.spec.cls == SemClass::SurgicalTool && r.spec.placement_union)
        return old_cls == SemClass::VocalFolds || old_cls == SemClass::GlottalSpace;
    return old_cls == r.spec.placement_cls;
}

// Verifier-local adjacency over global sub-block coordinates.
bool sub_adjacent(int ax, int ay, int bx, int by, Adjacency adj) {
    int dx = std::abs(ax - bx), dy = std::abs(ay - by);
    if (dx == 0 && dy == 0)
        return false;
    return adj == Adjacency::EightWay ? (dx <= 1 && dy <= 1) : (dx + dy == 1);
}

int local_cost(const GridGeometry& g, const std::vector<SubBlockRef>& subs,
               Adjacency adj, bool column_penalty) {
    int cost = 0;
    for (size_t i = 0; i < subs.size(); ++i) {
        int ax, ay;
        g.global_from_subref(subs[i], ax, ay);
        for (size_t j = i + 1; j < subs.size(); ++j) {
            int bx, by;
            g.global_from_subref(subs[j], bx, by);
            if (sub_adjacent(ax, ay, bx, by, adj))
                continue;
            if (ax == bx)
                ++cost;
            if (column_penalty && ay == by)
                ++cost;
        }
    }
    return cost;
}

// Scanline flood over an arbitrary passability predicate.
template <typename Pass, typename Visit>
void scanline_flood(Rect bounds, Cell start, Pass passable, Visit visit) {
    if (!bounds.contains(start) || !passable(start))
        return;
    const int w = bounds.y1 - bounds.y0 + 1;
    std::vector<uint8_t> seen(static_cast<size_t>(bounds.x1 - bounds.x0 + 1) * w, 0);
    auto idx = [&](Cell c) -> uint8_t& {
        return seen[static_cast<size_t>(c.x - bounds.x0) * w + (c.y - bounds.y0)];
    };
    std::vector<Cell> stack{start};
    idx(start) = 1;
    while (!stack.empty()) {
        Cell c = stack.back();
        stack.pop_back();
        // walk the whole horizontal span through c
        int y0 = c.y;
        while (y0 > bounds.y0 && !idx({c.x, y0 - 1}) && passable({c.x, y0 - 1}))
            idx({c.x, --y0}) = 1;
        int y1 = c.y;
        while (y1 < bounds.y1 && !idx({c.x, y1 + 1}) && passable({c.x, y1 + 1}))
            idx({c.x, ++y1}) = 1;
        for (int y = y0; y <= y1; ++y) {
            visit({c.x, y});
            for (int dx : {-1, 1}) {
                Cell n{c.x + dx, y};
                if (n.x < bounds.x0 || n.x > bounds.x1 || idx(n) || !passable(n))
                    continue;
                idx(n) = 1;
                stack.push_back(n);
            }
        }
    }
}

struct ObjectReplayResult {
    bool closure_ok = true;
    std::string closure_detail;
    bool placement_ok = true;
    std::string placement_detail;
};

// Recompute a contour object's fill on the evolving grid and apply it.
ObjectReplayResult replay_contour(CellGrid& g, const ObjectRecord& r) {
    ObjectReplayResult res;
    const GridGeometry& geom = g.geometry();
    const SemClass place = r.spec.placement_cls;
    const SemClass cls = r.spec.cls;

    Rect bounds = cls == SemClass::Pathology
                      ? geom.block_rect({r.chosen_block})
                      : Rect{0, geom.height - 1, 0, geom.width - 1};
    bool half_plane = cls == SemClass::Intubation;
    if (half_plane)
        bounds.x1 = std::min(bounds.x1, r.center.x);

    std::vector<uint8_t> in_sel(static_cast<size_t>(geom.width) * geom.height, 0);
    for (const SubBlockRef& s : r.subblocks) {
        Rect sr = geom.subblock_rect(s);
        for (int x = sr.x0; x <= sr.x1; ++x)
            for (int y = sr.y0; y <= sr.y1; ++y)
                in_sel[static_cast<size_t>(x) * geom.width + y] = 1;
    }
    auto selected = [&](Cell c) {
        return in_sel[static_cast<size_t>(c.x) * geom.width + c.y] != 0;
    };

    if (selected(r.center)) {
        res.closure_ok = false;
        res.closure_detail = "selection covers the center " + cell_str(r.center);
        return res;
    }

    // closure: ignore classes, stop only at the selection
    scanline_flood(
        bounds, r.center, [&](Cell c) { return !selected(c); },
        [&](Cell c) {
            bool edge = c.x == bounds.x0 || c.y == bounds.y0 || c.y == bounds.y1 ||
                        (c.x == bounds.x1 && !half_plane);
            if (edge && res.closure_ok) {
                res.closure_ok = false;
                res.closure_detail = "flood reached scope edge at " + cell_str(c);
            }
        });
    if (!res.closure_ok)
        return res;

    std::vector<Cell> fill;
    for (const SubBlockRef& s : r.subblocks) {
        Rect sr = geom.subblock_rect(s);
        for (int x = sr.x0; x <= sr.x1; ++x)
            for (int y = sr.y0; y <= sr.y1; ++y)
                if (g.at(x, y) == place)
                    fill.push_back({x, y});
    }
    scanline_flood(
        bounds, r.center,
        [&](Cell c) { return !selected(c) && g.at(c) == place; },
        [&](Cell c) { fill.push_back(c); });

    if (cls == SemClass::Intubation && !r.pivots.empty()) {
        int lo = r.pivots[0].position.y, hi = lo;
        for (const ContourPivot& p : r.pivots) {
            lo = std::min(lo, p.position.y);
            hi = std::max(hi, p.position.y);
        }
        for (int y = lo; y <= hi; ++y)
            for (int x = r.center.x + 1; x < geom.height; ++x)
                if (g.at(x, y) == place)
                    fill.push_back({x, y});
    }

    // ring overhang and extension overlap; each cell is checked once
    std::sort(fill.begin(), fill.end());
    fill.erase(std::unique(fill.begin(), fill.end()), fill.end());

    for (Cell c : fill) {
        if (g.at(c) != place) {
            res.placement_ok = false;
            res.placement_detail = "recompute touched non-placement cell " + cell_str(c);
            return res;
        }
    }
    for (Cell c : fill)
        g.set(c, cls);
    return res;
}

void replay_tool(CellGrid& g, const ObjectRecord& r) {
    const GridGeometry& geom = g.geometry();
    if (r.rod.size() != 2)
        throw DecodeError("tool record lacks rod endpoints");
    std::vector<Cell> line = raster_segment(r.rod[0], r.rod[1]);
    const int w = r.spec.half_width;

    Rect box{geom.height - 1, 0, geom.width - 1, 0};
    for (Cell c : line) {
        box.x0 = std::min(box.x0, c.x);
        box.x1 = std::max(box.x1, c.x);
        box.y0 = std::min(box.y0, c.y);
        box.y1 = std::max(box.y1, c.y);
    }
    box.x0 = std::max(0, box.x0 - w);
    box.x1 = std::min(geom.height - 1, box.x1 + w);
    box.y0 = std::max(0, box.y0 - w);
    box.y1 = std::min(geom.width - 1, box.y1 + w);

    // per-cell distance to the segment, rather than the generator's stamping
    for (int x = box.x0; x <= box.x1; ++x) {
        for (int y = box.y0; y <= box.y1; ++y) {
            if (!record_placement_ok(r, g.at(x, y)))
                continue;
            int best = std::numeric_limits<int>::max();
            for (Cell c : line)
                best = std::min(best, chebyshev(c, {x, y}));
            if (best <= w)
                g.set(x, y, SemClass::SurgicalTool);
        }
    }
}

} // namespace

std::string VerificationReport::summary() const {
    std::string s;
    for (const auto& c : constraints) {
        s += (c.pass ? "  [pass] " : "  [FAIL] ") + c.name;
        if (!c.detail.empty())
            s += ": " + c.detail;
        s += "\n";
    }
    s += "  soft cost " + std::to_string(recomputed_cost) + ", " +
         std::to_string(diff_cells) + " cells changed\n";
    return s;
}

VerificationReport verify_grids(const CellGrid& image, const ImageMetadata& meta,
                                const CellGrid& background) {
    const GridGeometry& g = image.geometry();
    if (background.geometry() != g)
        throw DecodeError("background and image geometries differ");

    VerificationReport report;
    Checker check{report};

    CellGrid stripped = strip_classes(background, dynamic_classes());

    // placement safety: every changed cell gained a dynamic class whose
    // recorded placement matches what stood there
    {
        bool ok = true;
        std::string detail;
        size_t diffs = 0;
        for (int x = 0; x < g.height && ok; ++x) {
            for (int y = 0; y < g.width; ++y) {
                SemClass before = stripped.at(x, y);
                SemClass after = image.at(x, y);
                if (before == after)
                    continue;
                ++diffs;
                bool has_class = false, legal = false;
                for (const ObjectRecord& r : meta.objects) {
                    if (r.spec.cls != after)
                        continue;
                    has_class = true;
                    legal = legal || record_placement_ok(r, before);
                }
                if (!has_class) {
                    ok = false;
                    detail = "cell " + cell_str({x, y}) + " changed to " +
                             class_name(after) + ", which no recorded object generates";
                    break;
                }
                if (!legal) {
                    ok = false;
                    detail = std::string(class_name(after)) + " at " + cell_str({x, y}) +
                             " overwrote " + class_name(before);
                    break;
                }
            }
        }
        // recount completely when the scan broke early
        if (!ok) {
            diffs = 0;
            for (int x = 0; x < g.height; ++x)
                for (int y = 0; y < g.width; ++y)
                    diffs += stripped.at(x, y) != image.at(x, y);
        }
        report.diff_cells = diffs;
        check.add("placement-safety", ok, detail);
    }

    // containment: pathology confined to its recorded block
    {
        bool ok = true;
        std::string detail;
        const ObjectRecord* pathology = nullptr;
        for (const ObjectRecord& r : meta.objects)
            if (r.spec.cls == SemClass::Pathology)
                pathology = &r;
        if (pathology) {
            Rect blk = g.block_rect({pathology->chosen_block});
            for (int x = 0; x < g.height && ok; ++x)
                for (int y = 0; y < g.width && ok; ++y)
                    if (image.at(x, y) == SemClass::Pathology && !blk.contains({x, y})) {
                        ok = false;
                        detail = "pathology cell " + cell_str({x, y}) +
                                 " outside block " + std::to_string(pathology->chosen_block);
                    }
        } else {
            size_t n = 0;
            for (int x = 0; x < g.height; ++x)
                for (int y = 0; y < g.width; ++y)
                    n += image.at(x, y) == SemClass::Pathology;
            if (n != 0) {
                ok = false;
                detail = "image has pathology cells but no pathology record";
            }
        }
        check.add("containment", ok, detail);
    }

    // pivot geometry
    {
        bool ok = true;
        std::string detail;
        for (const ObjectRecord& r : meta.objects) {
            if (r.spec.cls == SemClass::SurgicalTool)
                continue;
            size_t expected = static_cast<size_t>(r.spec.pivot_count);
            if (r.spec.cls == SemClass::Intubation && r.spec.pivot_count == 8)
                expected = 5; // upper half-lines only
            if (r.pivots.size() != expected) {
                ok = false;
                detail = std::string(class_name(r.spec.cls)) + ": " +
                         std::to_string(r.pivots.size()) + " pivots, expected " +
                         std::to_string(expected);
                break;
            }
            // half-line scheme: idfp k must sit on compass direction k
            static const int dir8[8][2] = {{0, 1},  {-1, 1}, {-1, 0}, {-1, -1},
                                           {0, -1}, {1, -1}, {1, 0},  {1, 1}};
            static const LineKind kind8[8] = {
                LineKind::Row, LineKind::SecDiag, LineKind::Col, LineKind::MainDiag,
                LineKind::Row, LineKind::SecDiag, LineKind::Col, LineKind::MainDiag};
            bool compass = r.spec.pivot_count == 8;

            std::array<int, 4> per_kind{};
            for (size_t i = 0; i < r.pivots.size() && ok; ++i) {
                const ContourPivot& p = r.pivots[i];
                if (p.idfp != static_cast<int>(i)) {
                    ok = false;
                    detail = "pivot idfp out of order";
                    break;
                }
                int dx = p.position.x - r.center.x;
                int dy = p.position.y - r.center.y;
                int d = chebyshev(p.position, r.center);
                if (d < r.spec.min_pivot_dist || d > r.spec.max_pivot_dist) {
                    ok = false;
                    detail = "pivot " + std::to_string(p.idfp) + " at distance " +
                             std::to_string(d) + " outside [" +
                             std::to_string(r.spec.min_pivot_dist) + "," +
                             std::to_string(r.spec.max_pivot_dist) + "]";
                    break;
                }
                if (compass) {
                    int ex = dir8[i][0] * d, ey = dir8[i][1] * d;
                    if (dx != ex || dy != ey || p.line_kind != kind8[i]) {
                        ok = false;
                        detail = "pivot " + std::to_string(p.idfp) +
                                 " is off its half-line or mislabeled";
                        break;
                    }
                }
                per_kind[static_cast<size_t>(p.line_kind)]++;
                for (size_t j = 0; j < i; ++j)
                    if (r.pivots[j].position == p.position) {
                        ok = false;
                        detail = "duplicate pivot position " + cell_str(p.position);
                        break;
                    }
            }
            if (ok && r.spec.cls == SemClass::Pathology && compass) {
                for (int k = 0; k < 4 && ok; ++k)
                    if (per_kind[k] != 2) {
                        ok = false;
                        detail = std::string("expected 2 pivots per line kind, got ") +
                                 std::to_string(per_kind[k]);
                    }
            }
            if (!ok)
                break;
        }
        check.add("pivot-geometry", ok, detail);
    }

    // connectivity of each recorded selection
    {
        bool ok = true;
        std::string detail;
        for (const ObjectRecord& r : meta.objects) {
            if (r.subblocks.empty())
                continue;
            const size_t n = r.subblocks.size();
            std::vector<int> sx(n), sy(n);
            for (size_t i = 0; i < n; ++i)
                g.global_from_subref(r.subblocks[i], sx[i], sy[i]);
            std::vector<uint8_t> vis(n, 0);
            std::vector<size_t> stack{0};
            vis[0] = 1;
            size_t seen = 1;
            while (!stack.empty()) {
                size_t i = stack.back();
                stack.pop_back();
                for (size_t j = 0; j < n; ++j)
                    if (!vis[j] && sub_adjacent(sx[i], sy[i], sx[j], sy[j],
                                                meta.search.adjacency)) {
                        vis[j] = 1;
                        ++seen;
                        stack.push_back(j);
                    }
            }
            if (seen != n) {
                ok = false;
                detail = std::string(class_name(r.spec.cls)) + " selection is disconnected";
                break;
            }
        }
        check.add("connectivity", ok, detail);
    }

    // replay: closure plus exact reconstruction of the emitted image
    {
        bool closure_ok = true, placement_ok = true, decode_ok = true;
        std::string closure_detail, placement_detail, decode_detail;
        CellGrid replay = stripped;
        for (const ObjectRecord& r : meta.objects) {
            try {
                if (r.spec.cls == SemClass::SurgicalTool) {
                    replay_tool(replay, r);
                } else {
                    ObjectReplayResult res = replay_contour(replay, r);
                    if (!res.closure_ok) {
                        closure_ok = false;
                        closure_detail = res.closure_detail;
                        break;
                    }
                    if (!res.placement_ok) {
                        placement_ok = false;
                        placement_detail = res.placement_detail;
                        break;
                    }
                }
            } catch (const Error& e) {
                decode_ok = false;
                decode_detail = e.what();
                break;
            }
        }
        check.add("contour-closure", closure_ok, closure_detail);
        if (!placement_ok)
            check.add("placement-safety(replay)", false, placement_detail);
        if (!decode_ok)
            check.add("metadata-consistency", false, decode_detail);

        bool recon = false;
        std::string recon_detail;
        if (closure_ok && placement_ok && decode_ok) {
            size_t diffs = 0;
            Cell first_bad{-1, -1};
            for (int x = 0; x < g.height; ++x)
                for (int y = 0; y < g.width; ++y)
                    if (replay.at(x, y) != image.at(x, y)) {
                        if (diffs == 0)
                            first_bad = {x, y};
                        ++diffs;
                    }
            recon = diffs == 0;
            if (!recon)
                recon_detail = std::to_string(diffs) +
                               " cells differ from the recomputed image, first at " +
                               cell_str(first_bad);
        } else {
            recon_detail = "skipped: replay failed";
        }
        check.add("reconstruction", recon, recon_detail);
    }

    // group class presence/absence
    {
        bool ok = true;
        std::string detail;
        if (meta.group) {
            std::array<bool, kNumClasses> want{};
            for (const ObjectSpec& o : expand_group_template(*meta.group))
                want[static_cast<size_t>(o.cls)] = true;
            ClassHistogram h = class_histogram(image);
            for (SemClass c : dynamic_classes()) {
                bool present = h[static_cast<size_t>(c)] > 0;
                if (present != want[static_cast<size_t>(c)]) {
                    ok = false;
                    detail = std::string(class_name(c)) + (present ? " present" : " absent") +
                             " but group " + std::to_string(*meta.group) +
                             (want[static_cast<size_t>(c)] ? " requires it" : " excludes it");
                    break;
                }
            }
        }
        check.add("class-presence", ok, detail);
    }

    // soft cost recomputation
    {
        bool ok = true;
        std::string detail;
        int total = 0;
        for (const ObjectRecord& r : meta.objects) {
            if (r.spec.cls == SemClass::SurgicalTool)
                continue;
            int c = local_cost(g, r.subblocks, meta.search.adjacency,
                               meta.search.column_penalty);
            total += c;
            if (c != r.cost) {
                ok = false;
                detail = std::string(class_name(r.spec.cls)) + " recorded cost " +
                         std::to_string(r.cost) + " but recomputed " + std::to_string(c);
            }
        }
        report.recomputed_cost = total;
        check.add("cost-match", ok, detail);
    }

    return report;
}

VerificationReport verify_output(const std::string& image_path,
                                 const std::string& meta_path,
                                 const ClassPalette& palette,
                                 const std::string& background_dir,
                                 const std::string& background_override) {
    ImageMetadata meta = load_metadata_file(meta_path);

    DecodeOptions dopt;
    dopt.block_dim = meta.block_dim;
    dopt.sub_dim = meta.sub_dim;
    CellGrid image = decode_label_image(read_image(image_path), palette, dopt);

    std::string bg_path = background_override;
    if (bg_path.empty()) {
        namespace fs = std::filesystem;
        fs::path p(meta.background);
        bg_path = background_dir.empty() ? meta.background
                                         : (fs::path(background_dir) / p.filename()).string();
    }
    CellGrid background = decode_label_image(read_image(bg_path), palette, dopt);

    if (image.geometry().width != meta.width || image.geometry().height != meta.height)
        throw DecodeError("image dimensions do not match the metadata record");

    return verify_grids(image, meta, background);
}

} // namespace laryngen
