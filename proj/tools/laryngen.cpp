#include <iostream>

#include <CLI11.hpp>

#include "laryngen/pipeline.hpp"
#include "laryngen/verify.hpp"

using namespace laryngen;

int main(int argc, char** argv) {
    CLI::App app{"laryngen: declarative synthesis of labeled laryngeal endoscopy images"};
    app.require_subcommand(1);

    // --- generate ---
    RunConfig cfg;
    int group = 0;
    std::string adjacency = "eight";
    auto* gen = app.add_subcommand("generate", "generate labeled images from backgrounds");
    gen->add_option("--input", cfg.input_dir, "directory of background label images")
        ->required();
    gen->add_option("--out", cfg.output_dir, "output directory (labels/ + meta/)")
        ->required();
    gen->add_option("--group", group, "dataset group template (1..5)")
        ->check(CLI::Range(1, 5));
    gen->add_option("--scene", cfg.scene_file, "scene specification file (.scene)");
    gen->add_option("--count", cfg.count, "number of images to generate")
        ->default_val(1);
    gen->add_option("--seed", cfg.master_seed, "master seed")->default_val(0);
    gen->add_option("--palette", cfg.palette_path,
                    "palette file (default: $LARYNGEN_PALETTE, then built-in)");
    gen->add_flag("--exhaustive", cfg.search.exhaustive,
                  "globally minimal per-pair soft cost");
    gen->add_option("--jobs", cfg.jobs, "worker threads")->default_val(1);
    gen->add_option("--block", cfg.block_dim, "block dimension in cells")->default_val(64);
    gen->add_option("--sub", cfg.sub_dim, "sub-block dimension in cells")->default_val(8);
    gen->add_option("--snap", cfg.snap,
                    "L-inf color snap distance for noisy inputs (default off)");
    gen->add_option("--retries", cfg.search.retries, "resample budget per object")
        ->default_val(32);
    gen->add_option("--adjacency", adjacency, "sub-block adjacency: eight|four")
        ->check(CLI::IsMember({"eight", "four"}));
    gen->add_flag("--column-penalty", cfg.search.column_penalty,
                  "also penalise column-aligned non-adjacent pairs");

    // --- verify ---
    std::string v_image, v_meta, v_palette, v_input, v_background;
    auto* ver = app.add_subcommand("verify", "audit an emitted image against its metadata");
    ver->add_option("--image", v_image, "label image to verify")->required();
    ver->add_option("--meta", v_meta, "metadata record")->required();
    ver->add_option("--palette", v_palette, "palette file");
    ver->add_option("--input", v_input, "directory holding the original background");
    ver->add_option("--background", v_background, "explicit background image path");

    // --- strip ---
    std::string s_input, s_out, s_palette;
    int s_block = 64, s_sub = 8, s_snap = -1;
    auto* strip = app.add_subcommand("strip", "remove dynamic classes from label images");
    strip->add_option("--input", s_input, "input directory")->required();
    strip->add_option("--out", s_out, "output directory")->required();
    strip->add_option("--palette", s_palette, "palette file");
    strip->add_option("--block", s_block, "block dimension in cells");
    strip->add_option("--sub", s_sub, "sub-block dimension in cells");
    strip->add_option("--snap", s_snap, "L-inf color snap distance");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            if (group != 0)
                cfg.group = group;
            cfg.search.adjacency =
                adjacency == "four" ? Adjacency::FourWay : Adjacency::EightWay;
            BatchSummary summary = run_batch(cfg, std::cout);
            return summary.exit_code();
        }
        if (ver->parsed()) {
            ClassPalette palette = resolve_palette(v_palette);
            VerificationReport report =
                verify_output(v_image, v_meta, palette, v_input, v_background);
            std::cout << (report.pass() ? "PASS" : "FAIL") << "\n"
                      << report.summary();
            return report.pass() ? 0 : 1;
        }
        if (strip->parsed()) {
            ClassPalette palette = resolve_palette(s_palette);
            int n = strip_batch(s_input, s_out, palette, s_block, s_sub, s_snap, std::cout);
            return n > 0 ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ver->parsed() ? 2 : 1;
    }
    return 1;
}
