#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "laryngen/metadata.hpp"
#include "laryngen/palette.hpp"
#include "laryngen/synth.hpp"

namespace laryngen {

struct RunConfig {
    std::string input_dir;
    std::string output_dir;
    std::optional<int> group; // exactly one of group / scene_file
    std::string scene_file;
    int count = 1;
    uint64_t master_seed = 0;
    std::string palette_path; // empty: LARYNGEN_PALETTE env, then defaults
    int block_dim = 64;
    int sub_dim = 8;
    int snap = -1;
    int jobs = 1;
    SearchOptions search;
};

struct BatchSummary {
    int requested = 0;
    int succeeded = 0;
    int failed = 0;
    std::vector<std::string> errors; // one line per failed image

    // 0 all succeeded, 2 partial, 1 none (or fatal before generation)
    int exit_code() const {
        if (succeeded == 0)
            return 1;
        return failed == 0 ? 0 : 2;
    }
};

// Explicit path, else LARYNGEN_PALETTE, else shipped defaults.
ClassPalette resolve_palette(const std::string& explicit_path);

// Image filenames (sorted) directly inside `dir`.
std::vector<std::string> list_backgrounds(const std::string& dir);

// Generate cfg.count images round-robin over the backgrounds in input_dir,
// writing labels/NNNN.png and meta/NNNN.json under output_dir. Failed images
// are logged and skipped. Deterministic in (inputs, config, seed), including
// with jobs > 1.
BatchSummary run_batch(const RunConfig& cfg, std::ostream& log);

// Background preparation: strip the dynamic classes from every image in
// input_dir and write the result under output_dir with the same filename.
int strip_batch(const std::string& input_dir, const std::string& output_dir,
                const ClassPalette& palette, int block_dim, int sub_dim, int snap,
                std::ostream& log);

} // namespace laryngen
