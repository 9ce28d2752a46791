#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <vector>

#include "laryngen/grid.hpp"
#include "laryngen/palette.hpp"

namespace laryngen {

// Raw 24-bit RGB raster, row-major top-to-bottom.
struct LabelImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels; // 3 bytes per pixel

    Rgb at(int x, int y) const {
        size_t i = 3 * (static_cast<size_t>(x) * width + y);
        return {pixels[i], pixels[i + 1], pixels[i + 2]};
    }
    void set(int x, int y, Rgb c) {
        size_t i = 3 * (static_cast<size_t>(x) * width + y);
        pixels[i] = c.r;
        pixels[i + 1] = c.g;
        pixels[i + 2] = c.b;
    }

    bool operator==(const LabelImage&) const = default;
};

struct DecodeOptions {
    int block_dim = 64;
    int sub_dim = 8;
    int snap = -1; // L-inf snap distance; <0 means exact matching only
};

// Exact (or snapped) pixel-to-class mapping. Image dimensions must be
// divisible by block_dim. Unknown colors raise DecodeError naming the pixel.
CellGrid decode_label_image(const LabelImage& img, const ClassPalette& palette,
                            const DecodeOptions& opt = {});

// pixel(x,y) = palette[grid(x,y)]. Deterministic byte output.
LabelImage encode_label_image(const CellGrid& grid, const ClassPalette& palette);

using ClassHistogram = std::array<uint64_t, kNumClasses>;

ClassHistogram class_histogram(const CellGrid& grid);

// Replace every cell of a dynamic class per the background-preparation rule:
// Pathology -> VocalFolds, Intubation -> GlottalSpace, SurgicalTool -> the
// majority of {VocalFolds, GlottalSpace} within its block (nearest such cell
// grid-wide when the block has neither). victims must be a subset of the
// three dynamic classes. Idempotent; non-victim cells are untouched.
CellGrid strip_classes(const CellGrid& grid, const std::set<SemClass>& victims);

inline const std::set<SemClass>& dynamic_classes() {
    static const std::set<SemClass> s{SemClass::Pathology, SemClass::SurgicalTool,
                                      SemClass::Intubation};
    return s;
}

} // namespace laryngen
