#pragma once

#include <optional>
#include <string>
#include <vector>

#include "laryngen/synth.hpp"

namespace laryngen {

// Everything needed to audit one emitted image without the generator's
// in-memory state: parameters, seeds, and each object's guessed geometry.
struct ObjectRecord {
    ObjectSpec spec;
    uint64_t seed = 0;
    int chosen_block = 0;
    Cell center;
    std::vector<ContourPivot> pivots;
    std::vector<SubBlockRef> subblocks;
    int cost = 0;
    std::vector<Cell> rod; // [entry, tip] for tools, empty otherwise

    static ObjectRecord from_instance(const ObjectInstance& inst);
};

struct ImageMetadata {
    int format = 1;
    std::string background; // as found in the input directory
    int width = 0, height = 0;
    int block_dim = 64, sub_dim = 8;
    std::optional<int> group;
    std::string scene_digest;
    uint64_t master_seed = 0;
    int image_index = 0;
    uint64_t image_seed = 0;
    SearchOptions search;
    std::vector<ObjectRecord> objects;
};

std::string emit_metadata(const ImageMetadata& meta);
ImageMetadata parse_metadata(const std::string& text);
ImageMetadata load_metadata_file(const std::string& path);

} // namespace laryngen
