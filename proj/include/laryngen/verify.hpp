#pragma once

#include <string>
#include <vector>

#include "laryngen/label_image.hpp"
#include "laryngen/metadata.hpp"

namespace laryngen {

struct ConstraintResult {
    std::string name;
    bool pass = false;
    std::string detail; // first failure found, empty on pass
};

// Post-hoc audit computed from the emitted artifacts alone (image, metadata,
// background), never from search state.
struct VerificationReport {
    std::vector<ConstraintResult> constraints;
    int recomputed_cost = 0; // soft cost summed over contour objects
    size_t diff_cells = 0;   // image vs stripped background

    bool pass() const {
        for (const auto& c : constraints)
            if (!c.pass)
                return false;
        return true;
    }
    std::string summary() const;
};

// The checks are re-implementations of the generator's constraints (scanline
// flood, per-cell rod distance, local cost counting); they share only the
// grid/palette data model with the synthesis path.
VerificationReport verify_grids(const CellGrid& image, const ImageMetadata& meta,
                                const CellGrid& background);

// File-level entry: decodes the image, metadata and background (path
// resolved from the metadata record against background_dir, unless
// background_override is given). Raises on unreadable or mismatched files;
// constraint violations are reported, not thrown.
VerificationReport verify_output(const std::string& image_path,
                                 const std::string& meta_path,
                                 const ClassPalette& palette,
                                 const std::string& background_dir = "",
                                 const std::string& background_override = "");

} // namespace laryngen
