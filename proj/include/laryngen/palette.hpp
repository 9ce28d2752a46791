#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "laryngen/grid.hpp"

namespace laryngen {

struct Rgb {
    uint8_t r = 0, g = 0, b = 0;

    uint32_t key() const { return (uint32_t(r) << 16) | (uint32_t(g) << 8) | b; }
    bool operator==(const Rgb&) const = default;
};

std::string rgb_to_string(Rgb c);

// Bijection between the seven classes and pixel colors. All correctness in
// this project is palette-relative; users matching a source dataset must
// load that dataset's palette (the shipped defaults are only defaults).
class ClassPalette {
public:
    // Shipped defaults: void gray, vocal folds light green, other tissue
    // green, glottal space blue, pathology purple, surgical tool red,
    // intubation yellow.
    static ClassPalette defaults();

    // Parse "class = R,G,B" lines; '#' comments and blank lines allowed.
    // Every class must appear exactly once and colors must be distinct.
    static ClassPalette parse(const std::string& text);

    static ClassPalette load_file(const std::string& path);

    Rgb color(SemClass c) const { return colors_[static_cast<size_t>(c)]; }

    // Exact color -> class. Returns false if the color is not in the palette.
    bool classify(Rgb c, SemClass& out) const;

    // Nearest class under L-inf distance, for --snap ingestion. Returns
    // false if the nearest color is farther than max_dist.
    bool classify_snap(Rgb c, int max_dist, SemClass& out) const;

    std::string format() const;

    bool operator==(const ClassPalette&) const = default;

private:
    ClassPalette() = default;
    void check_injective() const;

    std::array<Rgb, kNumClasses> colors_{};
};

} // namespace laryngen
