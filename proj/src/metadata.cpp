#include "laryngen/metadata.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace laryngen {

using nlohmann::json;

namespace {

json cell_to_json(Cell c) {
    return json::array({c.x, c.y});
}

Cell cell_from_json(const json& j) {
    return {j.at(0).get<int>(), j.at(1).get<int>()};
}

SemClass class_from_json(const json& j) {
    SemClass c;
    if (!class_from_name(j.get<std::string>(), c))
        throw DecodeError("metadata: unknown class '" + j.get<std::string>() + "'");
    return c;
}

json spec_to_json(const ObjectSpec& o) {
    json p{
        {"placement", class_name(o.placement_cls)},
        {"placement_union", o.placement_union},
        {"pivot_count", o.pivot_count},
        {"min_pivot_dist", o.min_pivot_dist},
        {"max_pivot_dist", o.max_pivot_dist},
        {"center_margin", o.center_margin},
        {"block_fraction", o.block_fraction},
        {"rect_padding", o.rect_padding},
    };
    if (o.cls == SemClass::Intubation)
        p["bottom_band"] = o.bottom_band;
    if (o.cls == SemClass::SurgicalTool) {
        p["half_width"] = o.half_width;
        p["min_length"] = o.min_length;
        p["max_length"] = o.max_length;
    }
    return p;
}

ObjectSpec spec_from_json(SemClass cls, const json& p) {
    ObjectSpec o = ObjectSpec::defaults(cls);
    o.placement_cls = class_from_json(p.at("placement"));
    o.placement_union = p.at("placement_union").get<bool>();
    o.pivot_count = p.at("pivot_count").get<int>();
    o.min_pivot_dist = p.at("min_pivot_dist").get<int>();
    o.max_pivot_dist = p.at("max_pivot_dist").get<int>();
    o.center_margin = p.at("center_margin").get<int>();
    o.block_fraction = p.at("block_fraction").get<double>();
    o.rect_padding = p.at("rect_padding").get<int>();
    if (cls == SemClass::Intubation)
        o.bottom_band = p.at("bottom_band").get<int>();
    if (cls == SemClass::SurgicalTool) {
        o.half_width = p.at("half_width").get<int>();
        o.min_length = p.at("min_length").get<int>();
        o.max_length = p.at("max_length").get<int>();
    }
    return o;
}

} // namespace

ObjectRecord ObjectRecord::from_instance(const ObjectInstance& inst) {
    ObjectRecord r;
    r.spec = inst.spec;
    r.seed = inst.seed;
    r.chosen_block = inst.chosen_block.idb;
    r.center = inst.center;
    r.pivots = inst.pivots;
    r.subblocks = inst.selection.chosen;
    r.cost = inst.selection.cost;
    if (inst.spec.cls == SemClass::SurgicalTool)
        r.rod = {inst.rod_entry, inst.rod_tip};
    return r;
}

std::string emit_metadata(const ImageMetadata& meta) {
    json j;
    j["format"] = meta.format;
    j["background"] = meta.background;
    j["width"] = meta.width;
    j["height"] = meta.height;
    j["geometry"] = {{"block_dim", meta.block_dim}, {"sub_dim", meta.sub_dim}};
    if (meta.group)
        j["group"] = *meta.group;
    j["scene_digest"] = meta.scene_digest;
    j["master_seed"] = meta.master_seed;
    j["image_index"] = meta.image_index;
    j["image_seed"] = meta.image_seed;
    j["search"] = {
        {"exhaustive", meta.search.exhaustive},
        {"adjacency", meta.search.adjacency == Adjacency::EightWay ? "eight" : "four"},
        {"column_penalty", meta.search.column_penalty},
        {"retries", meta.search.retries},
    };

    json objs = json::array();
    for (const ObjectRecord& r : meta.objects) {
        json o;
        o["class"] = class_name(r.spec.cls);
        o["seed"] = r.seed;
        o["chosen_block"] = r.chosen_block;
        o["center"] = cell_to_json(r.center);
        json pivots = json::array();
        for (const ContourPivot& p : r.pivots)
            pivots.push_back({{"idfp", p.idfp},
                              {"x", p.position.x},
                              {"y", p.position.y},
                              {"kind", line_kind_name(p.line_kind)}});
        o["pivots"] = std::move(pivots);
        json subs = json::array();
        for (const SubBlockRef& s : r.subblocks)
            subs.push_back(json::array({s.idb, s.idsb}));
        o["subblocks"] = std::move(subs);
        o["cost"] = r.cost;
        o["params"] = spec_to_json(r.spec);
        if (!r.rod.empty()) {
            o["rod_entry"] = cell_to_json(r.rod[0]);
            o["rod_tip"] = cell_to_json(r.rod[1]);
        }
        objs.push_back(std::move(o));
    }
    j["objects"] = std::move(objs);
    return j.dump(2) + "\n";
}

ImageMetadata parse_metadata(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DecodeError(std::string("metadata is not valid JSON: ") + e.what());
    }
    try {
        ImageMetadata m;
        m.format = j.at("format").get<int>();
        m.background = j.at("background").get<std::string>();
        m.width = j.at("width").get<int>();
        m.height = j.at("height").get<int>();
        m.block_dim = j.at("geometry").at("block_dim").get<int>();
        m.sub_dim = j.at("geometry").at("sub_dim").get<int>();
        if (j.contains("group"))
            m.group = j.at("group").get<int>();
        m.scene_digest = j.at("scene_digest").get<std::string>();
        m.master_seed = j.at("master_seed").get<uint64_t>();
        m.image_index = j.at("image_index").get<int>();
        m.image_seed = j.at("image_seed").get<uint64_t>();
        const json& s = j.at("search");
        m.search.exhaustive = s.at("exhaustive").get<bool>();
        m.search.adjacency = s.at("adjacency").get<std::string>() == "four"
                                 ? Adjacency::FourWay
                                 : Adjacency::EightWay;
        m.search.column_penalty = s.at("column_penalty").get<bool>();
        m.search.retries = s.at("retries").get<int>();

        for (const json& o : j.at("objects")) {
            ObjectRecord r;
            SemClass cls = class_from_json(o.at("class"));
            r.spec = spec_from_json(cls, o.at("params"));
            r.seed = o.at("seed").get<uint64_t>();
            r.chosen_block = o.at("chosen_block").get<int>();
            r.center = cell_from_json(o.at("center"));
            for (const json& p : o.at("pivots")) {
                ContourPivot cp;
                cp.idfp = p.at("idfp").get<int>();
                cp.position = {p.at("x").get<int>(), p.at("y").get<int>()};
                if (!line_kind_from_name(p.at("kind").get<std::string>(), cp.line_kind))
                    throw DecodeError("metadata: unknown pivot kind");
                r.pivots.push_back(cp);
            }
            for (const json& sref : o.at("subblocks"))
                r.subblocks.push_back({sref.at(0).get<int>(), sref.at(1).get<int>()});
            r.cost = o.at("cost").get<int>();
            if (o.contains("rod_entry"))
                r.rod = {cell_from_json(o.at("rod_entry")), cell_from_json(o.at("rod_tip"))};
            m.objects.push_back(std::move(r));
        }
        return m;
    } catch (const json::exception& e) {
        throw DecodeError(std::string("metadata schema error: ") + e.what());
    }
}

ImageMetadata load_metadata_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw DecodeError("cannot open metadata file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_metadata(ss.str());
}

} // namespace laryngen
