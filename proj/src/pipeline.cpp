#include "laryngen/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <ostream>
#include <thread>

#include "laryngen/image_io.hpp"

namespace laryngen {

namespace fs = std::filesystem;

ClassPalette resolve_palette(const std::string& explicit_path) {
    if (!explicit_path.empty())
        return ClassPalette::load_file(explicit_path);
    if (const char* env = std::getenv("LARYNGEN_PALETTE"); env && *env)
        return ClassPalette::load_file(env);
    return ClassPalette::defaults();
}

std::vector<std::string> list_backgrounds(const std::string& dir) {
    if (!fs::is_directory(dir))
        throw Error("input directory does not exist: " + dir);
    std::vector<std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && has_image_extension(e.path().string()))
            out.push_back(e.path().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::string stem_for(int index, int count) {
    int digits = 4;
    for (int c = 10000; c < count; c *= 10)
        ++digits;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%0*d", digits, index);
    return buf;
}

struct Background {
    std::string filename; // basename as recorded in metadata
    CellGrid stripped;
};

} // namespace

BatchSummary run_batch(const RunConfig& cfg, std::ostream& log) {
    if (cfg.count < 1)
        throw ContractError("count must be at least 1");
    if (cfg.group.has_value() == !cfg.scene_file.empty())
        throw ContractError("exactly one of --group and --scene is required");

    ClassPalette palette = resolve_palette(cfg.palette_path);
    SceneSpec spec = cfg.group ? SceneSpec{cfg.group, {}} : load_scene_file(cfg.scene_file);

    DecodeOptions dopt{cfg.block_dim, cfg.sub_dim, cfg.snap};
    std::vector<Background> backgrounds;
    for (const std::string& path : list_backgrounds(cfg.input_dir)) {
        try {
            CellGrid grid = decode_label_image(read_image(path), palette, dopt);
            backgrounds.push_back(
                {fs::path(path).filename().string(),
                 strip_classes(grid, dynamic_classes())});
        } catch (const Error& e) {
            log << "skipping undecodable background " << path << ": " << e.what() << "\n";
        }
    }
    if (backgrounds.empty())
        throw Error("no decodable background images in " + cfg.input_dir);

    fs::create_directories(fs::path(cfg.output_dir) / "labels");
    fs::create_directories(fs::path(cfg.output_dir) / "meta");

    struct Slot {
        bool ok = false;
        std::string error;
    };
    std::vector<Slot> slots(cfg.count);
    std::atomic<int> next{0};

    auto worker = [&]() {
        while (true) {
            int i = next.fetch_add(1);
            if (i >= cfg.count)
                return;
            const Background& bg = backgrounds[i % backgrounds.size()];
            std::string stem = stem_for(i, cfg.count);
            try {
                uint64_t image_seed = sub_seed(cfg.master_seed, i);
                GenerationPlan plan = compile(spec, bg.stripped, image_seed);

                CellGrid grid = bg.stripped;
                ImageMetadata meta;
                meta.background = bg.filename;
                meta.width = grid.geometry().width;
                meta.height = grid.geometry().height;
                meta.block_dim = cfg.block_dim;
                meta.sub_dim = cfg.sub_dim;
                meta.group = plan.group;
                meta.scene_digest = plan.digest;
                meta.master_seed = cfg.master_seed;
                meta.image_index = i;
                meta.image_seed = image_seed;
                meta.search = cfg.search;

                for (const GenerationTask& task : plan.tasks) {
                    auto [next_grid, inst] =
                        generate_object(grid, task.object, cfg.search, task.seed);
                    grid = std::move(next_grid);
                    meta.objects.push_back(ObjectRecord::from_instance(inst));
                }

                LabelImage img = encode_label_image(grid, palette);
                write_image_atomic(img,
                                   (fs::path(cfg.output_dir) / "labels" / (stem + ".png")).string());
                write_text_atomic(emit_metadata(meta),
                                  (fs::path(cfg.output_dir) / "meta" / (stem + ".json")).string());
                slots[i].ok = true;
            } catch (const Error& e) {
                slots[i].error = "image " + stem + " (background " + bg.filename +
                                 "): " + e.what();
            }
        }
    };

    int jobs = std::max(1, cfg.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }

    BatchSummary summary;
    summary.requested = cfg.count;
    for (const Slot& s : slots) {
        if (s.ok) {
            ++summary.succeeded;
        } else {
            ++summary.failed;
            summary.errors.push_back(s.error);
            log << s.error << "\n";
        }
    }
    log << summary.succeeded << "/" << summary.requested << " images generated";
    if (summary.failed)
        log << " (" << summary.failed << " failed)";
    log << "\n";
    return summary;
}

int strip_batch(const std::string& input_dir, const std::string& output_dir,
                const ClassPalette& palette, int block_dim, int sub_dim, int snap,
                std::ostream& log) {
    DecodeOptions dopt{block_dim, sub_dim, snap};
    fs::create_directories(output_dir);
    int written = 0;
    for (const std::string& path : list_backgrounds(input_dir)) {
        try {
            CellGrid grid = decode_label_image(read_image(path), palette, dopt);
            CellGrid stripped = strip_classes(grid, dynamic_classes());
            std::string out = (fs::path(output_dir) / fs::path(path).filename()).string();
            write_image_atomic(encode_label_image(stripped, palette), out);
            ++written;
        } catch (const Error& e) {
            log << "skipping " << path << ": " << e.what() << "\n";
        }
    }
    log << written << " backgrounds stripped\n";
    return written;
}

} // namespace laryngen
