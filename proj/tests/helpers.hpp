#pragma once

#include <unistd.h>

#include <filesystem>
#include <string>

#include "laryngen/label_image.hpp"
#include "laryngen/rng.hpp"

namespace testutil {

using namespace laryngen;

inline CellGrid uniform_grid(GridGeometry g, SemClass cls) {
    return CellGrid(g, cls);
}

// Synthetic laryngeal-style background: other tissue everywhere, a large
// vocal-fold field, and a glottal column running to the bottom border.
//   other tissue : frame
//   vocal folds  : rows 64..447, cols 64..447 (minus the glottal column)
//   glottal space: rows 192..511, cols 192..255
inline CellGrid synthetic_background() {
    CellGrid g(GridGeometry{512, 512, 64, 8}, SemClass::OtherTissue);
    for (int x = 64; x <= 447; ++x)
        for (int y = 64; y <= 447; ++y)
            g.set(x, y, SemClass::VocalFolds);
    for (int x = 192; x <= 511; ++x)
        for (int y = 192; y <= 255; ++y)
            g.set(x, y, SemClass::GlottalSpace);
    return g;
}

// Variant with the glottal column shifted and a void pocket, so batches see
// more than one background.
inline CellGrid synthetic_background_2() {
    CellGrid g(GridGeometry{512, 512, 64, 8}, SemClass::OtherTissue);
    for (int x = 0; x <= 63; ++x)
        for (int y = 0; y <= 63; ++y)
            g.set(x, y, SemClass::Void);
    for (int x = 64; x <= 447; ++x)
        for (int y = 128; y <= 511; ++y)
            g.set(x, y, SemClass::VocalFolds);
    for (int x = 256; x <= 511; ++x)
        for (int y = 256; y <= 319; ++y)
            g.set(x, y, SemClass::GlottalSpace);
    return g;
}

inline GridGeometry small_geometry() {
    return GridGeometry{16, 16, 8, 2};
}

inline std::filesystem::path fresh_temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() /
               ("laryngen_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace testutil
