#include "laryngen/label_image.hpp"

#include <algorithm>
#include <limits>

#include "laryngen/kernels.hpp"

namespace laryngen {

CellGrid decode_label_image(const LabelImage& img, const ClassPalette& palette,
                            const DecodeOptions& opt) {
    if (img.width <= 0 || img.height <= 0 ||
        img.pixels.size() != 3 * static_cast<size_t>(img.width) * img.height)
        throw DecodeError("label image has inconsistent dimensions");
    if (img.width % opt.block_dim != 0 || img.height % opt.block_dim != 0)
        throw ContractError("image " + std::to_string(img.width) + "x" +
                            std::to_string(img.height) + " not divisible by block_dim " +
                            std::to_string(opt.block_dim));

    GridGeometry geom{img.width, img.height, opt.block_dim, opt.sub_dim};
    CellGrid grid(geom);

    const size_t count = static_cast<size_t>(img.width) * img.height;

    if (opt.snap < 0) {
        uint32_t keys[kNumClasses];
        for (size_t i = 0; i < kNumClasses; ++i)
            keys[i] = palette.color(static_cast<SemClass>(i)).key();
        size_t bad = kernels::classify_rgb(grid.data(), img.pixels.data(), count,
                                           keys, kNumClasses);
        if (bad != kernels::npos) {
            int x = static_cast<int>(bad / img.width);
            int y = static_cast<int>(bad % img.width);
            throw DecodeError("pixel (" + std::to_string(x) + "," + std::to_string(y) +
                              ") color " + rgb_to_string(img.at(x, y)) +
                              " is not in the palette");
        }
        return grid;
    }

    for (size_t i = 0; i < count; ++i) {
        int x = static_cast<int>(i / img.width);
        int y = static_cast<int>(i % img.width);
        SemClass cls;
        if (!palette.classify_snap(img.at(x, y), opt.snap, cls))
            throw DecodeError("pixel (" + std::to_string(x) + "," + std::to_string(y) +
                              ") color " + rgb_to_string(img.at(x, y)) +
                              " is farther than " + std::to_string(opt.snap) +
                              " from every palette color");
        grid.data()[i] = static_cast<uint8_t>(cls);
    }
    return grid;
}

LabelImage encode_label_image(const CellGrid& grid, const ClassPalette& palette) {
    const GridGeometry& g = grid.geometry();
    LabelImage img;
    img.width = g.width;
    img.height = g.height;
    img.pixels.resize(3 * grid.size());

    Rgb colors[kNumClasses];
    for (size_t i = 0; i < kNumClasses; ++i)
        colors[i] = palette.color(static_cast<SemClass>(i));

    const uint8_t* src = grid.data();
    uint8_t* dst = img.pixels.data();
    for (size_t i = 0; i < grid.size(); ++i) {
        Rgb c = colors[src[i]];
        dst[0] = c.r;
        dst[1] = c.g;
        dst[2] = c.b;
        dst += 3;
    }
    return img;
}

ClassHistogram class_histogram(const CellGrid& grid) {
    ClassHistogram h{};
    for (size_t i = 0; i < kNumClasses; ++i)
        h[i] = kernels::count_eq(grid.data(), grid.size(), static_cast<uint8_t>(i));
    return h;
}

namespace {

// Majority of {VocalFolds, GlottalSpace} among the block's non-victim cells.
SemClass tool_replacement(const CellGrid& grid, Cell at) {
    const GridGeometry& g = grid.geometry();
    auto [blk, sub] = cell_to_refs(g, at.x, at.y);
    (void)sub;
    Rect r = g.block_rect(blk);
    size_t vf = 0, gs = 0;
    for (int x = r.x0; x <= r.x1; ++x) {
        const uint8_t* row = grid.data() + static_cast<size_t>(x) * g.width + r.y0;
        vf += kernels::count_eq(row, g.block_dim, static_cast<uint8_t>(SemClass::VocalFolds));
        gs += kernels::count_eq(row, g.block_dim, static_cast<uint8_t>(SemClass::GlottalSpace));
    }
    if (vf != gs && (vf | gs) != 0)
        return vf > gs ? SemClass::VocalFolds : SemClass::GlottalSpace;
    if (vf != 0) // tie with cells present: prefer vocal folds, the tool's usual rest
        return SemClass::VocalFolds;

    // Block has neither: nearest background cell grid-wide decides.
    int best = std::numeric_limits<int>::max();
    SemClass best_cls = SemClass::VocalFolds;
    for (int x = 0; x < g.height; ++x) {
        for (int y = 0; y < g.width; ++y) {
            SemClass c = grid.at(x, y);
            if (c != SemClass::VocalFolds && c != SemClass::GlottalSpace)
                continue;
            int d = chebyshev(at, {x, y});
            if (d < best) {
                best = d;
                best_cls = c;
            }
        }
    }
    return best_cls;
}

} // namespace

CellGrid strip_classes(const CellGrid& grid, const std::set<SemClass>& victims) {
    for (SemClass v : victims)
        if (!dynamic_classes().count(v))
            throw ContractError(std::string("cannot strip background class '") +
                                class_name(v) + "'");

    CellGrid out = grid;
    const GridGeometry& g = grid.geometry();

    // Pathology and Intubation are fixed byte remaps; do them in one pass.
    uint8_t table[16];
    for (size_t i = 0; i < 16; ++i)
        table[i] = static_cast<uint8_t>(i);
    if (victims.count(SemClass::Pathology))
        table[static_cast<size_t>(SemClass::Pathology)] =
            static_cast<uint8_t>(SemClass::VocalFolds);
    if (victims.count(SemClass::Intubation))
        table[static_cast<size_t>(SemClass::Intubation)] =
            static_cast<uint8_t>(SemClass::GlottalSpace);
    kernels::remap(out.data(), grid.data(), grid.size(), table);

    if (victims.count(SemClass::SurgicalTool)) {
        // Replacement looks at the original grid, so the rule is stable and
        // the operation idempotent.
        for (int x = 0; x < g.height; ++x)
            for (int y = 0; y < g.width; ++y)
                if (grid.at(x, y) == SemClass::SurgicalTool)
                    out.set(x, y, tool_replacement(grid, {x, y}));
    }
    return out;
}

} // namespace laryngen
