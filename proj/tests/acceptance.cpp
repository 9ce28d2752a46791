// Acceptance suite. Each criterion prints exactly one PASS/FAIL line; the
// process exits 0 only if every criterion holds.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "helpers.hpp"
#include "laryngen/image_io.hpp"
#include "laryngen/pipeline.hpp"
#include "laryngen/verify.hpp"

using namespace laryngen;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    std::string name;
    std::function<bool(std::string&)> run;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// shared corpus for criteria 2-4
fs::path g_input_dir;
fs::path g_corpus_dir; // per-group subdirectories
bool g_corpus_ready = false;

constexpr int kImagesPerGroup = 100;

bool criterion_oracle_equivalence(std::string& detail) {
    auto t0 = std::chrono::steady_clock::now();
    GridGeometry g = testutil::small_geometry(); // 16x16, block 8, sub 2
    ObjectSpec spec = ObjectSpec::defaults(SemClass::Pathology);
    SearchOptions opt;
    opt.exhaustive = true;
    ConnectScope scope{SemClass::VocalFolds, std::nullopt, true};

    Rng rng(20240817);
    int compared = 0, infeasible_agreements = 0;
    for (int trial = 0; trial < 2000 && compared < 100; ++trial) {
        CellGrid grid(g, SemClass::VocalFolds);
        int holes = static_cast<int>(rng.bounded(7));
        for (int k = 0; k < holes; ++k) {
            Rect r = g.subblock_rect(g.subref_from_global(
                static_cast<int>(rng.bounded(8)), static_cast<int>(rng.bounded(8))));
            for (int x = r.x0; x <= r.x1; ++x)
                for (int y = r.y0; y <= r.y1; ++y)
                    grid.set(x, y, SemClass::Void);
        }
        Cell a{static_cast<int>(rng.bounded(16)), static_cast<int>(rng.bounded(16))};
        Cell b{static_cast<int>(rng.bounded(16)), static_cast<int>(rng.bounded(16))};
        if (grid.at(a) != SemClass::VocalFolds || grid.at(b) != SemClass::VocalFolds)
            continue;

        std::vector<SubBlockRef> region =
            guessable_subblocks(grid, bounding_rect(a, b), SemClass::VocalFolds,
                                std::nullopt);
        for (Cell c : {a, b}) {
            SubBlockRef s = cell_to_refs(g, c.x, c.y).second;
            auto it = std::lower_bound(region.begin(), region.end(), s);
            if (it == region.end() || !(*it == s))
                region.insert(it, s);
        }
        if (region.size() > 20)
            continue; // respect the oracle bound

        std::vector<ContourPivot> pivots{{0, a, LineKind::Row}, {1, b, LineKind::Row}};
        int oracle;
        try {
            oracle = brute_force_min_cost(g, a, b, region);
        } catch (const InfeasibleError&) {
            try {
                connect_pivots(grid, pivots, spec, scope, opt, rng);
                detail = "search found a selection the oracle deems infeasible";
                return false;
            } catch (const InfeasibleError&) {
                ++infeasible_agreements;
                continue;
            }
        }
        PathSelection sel = connect_pivots(grid, pivots, spec, scope, opt, rng);
        if (sel.cost != oracle) {
            detail = "cost mismatch: search " + std::to_string(sel.cost) + " vs oracle " +
                     std::to_string(oracle);
            return false;
        }
        ++compared;
    }
    double dt = seconds_since(t0);
    detail = std::to_string(compared) + " instances equal (+" +
             std::to_string(infeasible_agreements) + " infeasible agreements), " +
             std::to_string(dt) + " s";
    return compared >= 100 && dt < 10.0;
}

bool criterion_constraint_soundness(std::string& detail) {
    auto t0 = std::chrono::steady_clock::now();
    g_input_dir = testutil::fresh_temp_dir("acc_bg");
    g_corpus_dir = testutil::fresh_temp_dir("acc_corpus");
    ClassPalette palette = ClassPalette::defaults();
    write_png(encode_label_image(testutil::synthetic_background(), palette),
              (g_input_dir / "bg_a.png").string());
    write_png(encode_label_image(testutil::synthetic_background_2(), palette),
              (g_input_dir / "bg_b.png").string());

    for (int group = 1; group <= 5; ++group) {
        RunConfig cfg;
        cfg.input_dir = g_input_dir.string();
        cfg.output_dir = (g_corpus_dir / ("group" + std::to_string(group))).string();
        cfg.group = group;
        cfg.count = kImagesPerGroup;
        cfg.master_seed = 1000 + group;
        cfg.jobs = 2;
        std::ostringstream log;
        BatchSummary s = run_batch(cfg, log);
        if (s.succeeded != kImagesPerGroup) {
            detail = "group " + std::to_string(group) + ": only " +
                     std::to_string(s.succeeded) + "/" + std::to_string(kImagesPerGroup) +
                     " generated; " + (s.errors.empty() ? "" : s.errors[0]);
            return false;
        }

        std::set<SemClass> want;
        for (const ObjectSpec& o : expand_group_template(group))
            want.insert(o.cls);

        for (int i = 0; i < kImagesPerGroup; ++i) {
            char stem[8];
            std::snprintf(stem, sizeof stem, "%04d", i);
            fs::path img = fs::path(cfg.output_dir) / "labels" / (std::string(stem) + ".png");
            fs::path meta = fs::path(cfg.output_dir) / "meta" / (std::string(stem) + ".json");
            VerificationReport report = verify_output(img.string(), meta.string(),
                                                      palette, g_input_dir.string());
            if (!report.pass()) {
                detail = "group " + std::to_string(group) + " image " + stem +
                         " failed verification:\n" + report.summary();
                return false;
            }

            // class presence must match the group template exactly
            DecodeOptions dopt;
            CellGrid grid = decode_label_image(read_png(img.string()), palette, dopt);
            ClassHistogram h = class_histogram(grid);
            for (SemClass c : dynamic_classes()) {
                bool present = h[static_cast<size_t>(c)] > 0;
                if (present != (want.count(c) > 0)) {
                    detail = "group " + std::to_string(group) + " image " + stem +
                             ": class-presence mismatch for " + class_name(c);
                    return false;
                }
            }
        }
    }
    g_corpus_ready = true;
    detail = "5 groups x " + std::to_string(kImagesPerGroup) +
             " images verified, " + std::to_string(seconds_since(t0)) + " s";
    return seconds_since(t0) < 300.0;
}

bool criterion_placement_conservation(std::string& detail) {
    if (!g_corpus_ready) {
        detail = "corpus missing (criterion 2 failed)";
        return false;
    }
    ClassPalette palette = ClassPalette::defaults();
    DecodeOptions dopt;

    std::map<std::string, CellGrid> stripped_cache;
    int images = 0;
    for (int group = 1; group <= 5; ++group) {
        fs::path dir = g_corpus_dir / ("group" + std::to_string(group));
        for (int i = 0; i < kImagesPerGroup; ++i) {
            char stem[8];
            std::snprintf(stem, sizeof stem, "%04d", i);
            fs::path img_path = dir / "labels" / (std::string(stem) + ".png");
            fs::path meta_path = dir / "meta" / (std::string(stem) + ".json");
            ImageMetadata meta = load_metadata_file(meta_path.string());
            CellGrid image = decode_label_image(read_png(img_path.string()), palette, dopt);

            auto it = stripped_cache.find(meta.background);
            if (it == stripped_cache.end()) {
                CellGrid bg = decode_label_image(
                    read_png((g_input_dir / meta.background).string()), palette, dopt);
                it = stripped_cache.emplace(meta.background,
                                            strip_classes(bg, dynamic_classes())).first;
            }
            const CellGrid& stripped = it->second;

            ClassHistogram hb = class_histogram(stripped);
            ClassHistogram ha = class_histogram(image);
            const GridGeometry& g = image.geometry();

            for (int x = 0; x < g.height; ++x) {
                for (int y = 0; y < g.width; ++y) {
                    SemClass before = stripped.at(x, y);
                    SemClass after = image.at(x, y);
                    if (before == after)
                        continue;
                    bool legal = false;
                    switch (after) {
                        case SemClass::Pathology:
                            legal = before == SemClass::VocalFolds;
                            break;
                        case SemClass::Intubation:
                            legal = before == SemClass::GlottalSpace;
                            break;
                        case SemClass::SurgicalTool:
                            legal = before == SemClass::VocalFolds ||
                                    before == SemClass::GlottalSpace;
                            break;
                        default:
                            legal = false;
                    }
                    if (!legal) {
                        detail = "group " + std::to_string(group) + " image " + stem +
                                 ": illegal change at (" + std::to_string(x) + "," +
                                 std::to_string(y) + ") " + class_name(before) + " -> " +
                                 class_name(after);
                        return false;
                    }
                }
            }

            // histogram deltas balance exactly
            auto delta = [&](SemClass c) {
                return static_cast<long long>(ha[static_cast<size_t>(c)]) -
                       static_cast<long long>(hb[static_cast<size_t>(c)]);
            };
            if (delta(SemClass::Void) != 0 || delta(SemClass::OtherTissue) != 0) {
                detail = "static class histogram changed";
                return false;
            }
            long long gains = delta(SemClass::Pathology) + delta(SemClass::Intubation) +
                              delta(SemClass::SurgicalTool);
            long long losses = -(delta(SemClass::VocalFolds) + delta(SemClass::GlottalSpace));
            if (gains != losses) {
                detail = "gains " + std::to_string(gains) + " != losses " +
                         std::to_string(losses);
                return false;
            }
            if (group == 1 && delta(SemClass::Pathology) != -delta(SemClass::VocalFolds)) {
                detail = "group 1: purple gain != light-green loss";
                return false;
            }
            ++images;
        }
    }
    detail = std::to_string(images) + " images conserve cells exactly";
    return true;
}

bool criterion_pathology_containment(std::string& detail) {
    if (!g_corpus_ready) {
        detail = "corpus missing (criterion 2 failed)";
        return false;
    }
    ClassPalette palette = ClassPalette::defaults();
    DecodeOptions dopt;
    long long cells = 0;
    for (int group : {1, 2}) {
        fs::path dir = g_corpus_dir / ("group" + std::to_string(group));
        for (int i = 0; i < kImagesPerGroup; ++i) {
            char stem[8];
            std::snprintf(stem, sizeof stem, "%04d", i);
            CellGrid image = decode_label_image(
                read_png((dir / "labels" / (std::string(stem) + ".png")).string()),
                palette, dopt);
            ImageMetadata meta =
                load_metadata_file((dir / "meta" / (std::string(stem) + ".json")).string());

            int block = -1;
            for (const ObjectRecord& r : meta.objects)
                if (r.spec.cls == SemClass::Pathology)
                    block = r.chosen_block;
            const GridGeometry& g = image.geometry();
            Rect blk = g.block_rect({block});
            for (int x = 0; x < g.height; ++x) {
                for (int y = 0; y < g.width; ++y) {
                    if (image.at(x, y) != SemClass::Pathology)
                        continue;
                    ++cells;
                    if (!blk.contains({x, y})) {
                        detail = "group " + std::to_string(group) + " image " + stem +
                                 ": pathology cell outside the 64x64 block";
                        return false;
                    }
                }
            }
        }
    }
    detail = std::to_string(cells) + " pathology cells all inside their block";
    return cells > 0;
}

bool criterion_determinism(std::string& detail) {
    fs::path input = testutil::fresh_temp_dir("acc_det_in");
    ClassPalette palette = ClassPalette::defaults();
    write_png(encode_label_image(testutil::synthetic_background(), palette),
              (input / "bg_a.png").string());
    write_png(encode_label_image(testutil::synthetic_background_2(), palette),
              (input / "bg_b.png").string());

    auto tree = [](const fs::path& root) {
        std::map<std::string, std::string> out;
        for (const auto& e : fs::recursive_directory_iterator(root))
            if (e.is_regular_file())
                out[fs::relative(e.path(), root).string()] = slurp(e.path());
        return out;
    };

    RunConfig cfg;
    cfg.input_dir = input.string();
    cfg.group = 2;
    cfg.count = 8;
    cfg.master_seed = 42;

    std::ostringstream log;
    fs::path out1 = testutil::fresh_temp_dir("acc_det1");
    cfg.output_dir = out1.string();
    cfg.jobs = 1;
    if (run_batch(cfg, log).succeeded != 8) {
        detail = "generation failed";
        return false;
    }
    fs::path out2 = testutil::fresh_temp_dir("acc_det2");
    cfg.output_dir = out2.string();
    cfg.jobs = 3;
    run_batch(cfg, log);
    fs::path out3 = testutil::fresh_temp_dir("acc_det3");
    cfg.output_dir = out3.string();
    cfg.jobs = 3;
    run_batch(cfg, log);

    bool same = tree(out1) == tree(out2) && tree(out2) == tree(out3);
    detail = same ? "8-image trees byte-identical across jobs=1/3/3"
                  : "output trees differ";
    fs::remove_all(input);
    fs::remove_all(out1);
    fs::remove_all(out2);
    fs::remove_all(out3);
    return same;
}

bool criterion_codec_roundtrip(std::string& detail) {
    ClassPalette palette = ClassPalette::defaults();
    Rng rng(0xc0dec);
    DecodeOptions opt{8, 2, -1};
    for (int trial = 0; trial < 1000; ++trial) {
        GridGeometry g{64, 64, 8, 2};
        CellGrid grid(g);
        for (int x = 0; x < 64; ++x)
            for (int y = 0; y < 64; ++y)
                grid.set(x, y, static_cast<SemClass>(rng.bounded(kNumClasses)));

        LabelImage img = encode_label_image(grid, palette);
        CellGrid back = decode_label_image(img, palette, opt);
        if (!(back == grid)) {
            detail = "encode->decode lost cells at trial " + std::to_string(trial);
            return false;
        }
        LabelImage img2 = encode_label_image(back, palette);
        if (!(img2 == img)) {
            detail = "decode->encode changed bytes at trial " + std::to_string(trial);
            return false;
        }
    }
    detail = "1000 random images round-trip bit-exactly";
    return true;
}

bool criterion_dsl_totality(std::string& detail) {
    Rng rng(0xd51);
    for (int trial = 0; trial < 10000; ++trial) {
        size_t len = rng.bounded(160);
        std::string text(len, '\0');
        for (char& c : text)
            c = static_cast<char>(rng.bounded(256));
        try {
            parse_scene_spec(text);
        } catch (const ParseError&) {
        } catch (...) {
            detail = "non-diagnostic exception escaped at trial " + std::to_string(trial);
            return false;
        }
    }

    fs::path data = fs::path(LARYNGEN_TEST_DATA_DIR) / "scene";
    int valid = 0, invalid = 0;
    for (const auto& e : fs::directory_iterator(data / "valid")) {
        if (e.path().extension() != ".scene")
            continue;
        try {
            SceneSpec s = parse_scene_spec(slurp(e.path()));
            if (!(parse_scene_spec(pretty_print(s)) == s)) {
                detail = "pretty-print round-trip failed: " + e.path().filename().string();
                return false;
            }
        } catch (const ParseError& err) {
            detail = "valid scene rejected: " + e.path().filename().string() + ": " +
                     err.what();
            return false;
        }
        ++valid;
    }
    for (const auto& e : fs::directory_iterator(data / "invalid")) {
        if (e.path().extension() != ".scene")
            continue;
        fs::path expect_path = e.path();
        expect_path.replace_extension(".expect");
        std::string expect = slurp(expect_path);
        while (!expect.empty() && (expect.back() == '\n' || expect.back() == '\r'))
            expect.pop_back();
        try {
            parse_scene_spec(slurp(e.path()));
            detail = "invalid scene accepted: " + e.path().filename().string();
            return false;
        } catch (const ParseError& err) {
            std::string got = std::string(parse_error_kind_name(err.kind())) + " " +
                              std::to_string(err.line()) + ":" +
                              std::to_string(err.col()) + " " + err.message();
            if (got != expect) {
                detail = e.path().filename().string() + ": got '" + got +
                         "', expected '" + expect + "'";
                return false;
            }
        }
        ++invalid;
    }
    detail = "10000 fuzz inputs, " + std::to_string(valid) + " valid and " +
             std::to_string(invalid) + " invalid golden files exact";
    return valid >= 10 && invalid >= 10;
}

bool criterion_throughput(std::string& detail) {
    fs::path input = testutil::fresh_temp_dir("acc_thr_in");
    fs::path output = testutil::fresh_temp_dir("acc_thr_out");
    ClassPalette palette = ClassPalette::defaults();
    write_png(encode_label_image(testutil::synthetic_background(), palette),
              (input / "bg.png").string());

    RunConfig cfg;
    cfg.input_dir = input.string();
    cfg.output_dir = output.string();
    cfg.group = 2;
    cfg.count = 1;
    cfg.master_seed = 77;

    auto t0 = std::chrono::steady_clock::now();
    std::ostringstream log;
    BatchSummary s = run_batch(cfg, log);
    double dt = seconds_since(t0);

    fs::remove_all(input);
    fs::remove_all(output);
    if (s.succeeded != 1) {
        detail = "generation failed";
        return false;
    }
    detail = "one 512x512 group-2 image in " + std::to_string(dt) + " s (< 30 s)";
    return dt < 30.0;
}

} // namespace

int main() {
    std::vector<Criterion> criteria = {
        {"oracle equivalence (exhaustive search == brute force)", criterion_oracle_equivalence},
        {"constraint soundness (5 groups x 100 verified images)", criterion_constraint_soundness},
        {"placement safety & conservation", criterion_placement_conservation},
        {"pathology containment in one 64x64 block", criterion_pathology_containment},
        {"determinism (byte-identical trees, multi-job)", criterion_determinism},
        {"codec round-trip (1000 images, bit-exact)", criterion_codec_roundtrip},
        {"scene DSL totality and golden diagnostics", criterion_dsl_totality},
        {"throughput (group-2 image under 30 s)", criterion_throughput},
    };

    int failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        std::string detail;
        bool ok = false;
        try {
            ok = criteria[i].run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %zu: %s: %s\n", ok ? "PASS" : "FAIL", i + 1,
                    criteria[i].name.c_str(), detail.c_str());
        std::fflush(stdout);
        failed += !ok;
    }

    if (g_corpus_ready) {
        fs::remove_all(g_input_dir);
        fs::remove_all(g_corpus_dir);
    }
    std::printf("%zu/%zu acceptance criteria passed\n", criteria.size() - failed,
                criteria.size());
    return failed == 0 ? 0 : 1;
}
