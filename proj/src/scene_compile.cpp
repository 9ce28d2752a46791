#include "laryngen/scene.hpp"

#include "laryngen/rng.hpp"

namespace laryngen {

namespace {

bool tool_placement(const ObjectSpec& o, SemClass c) {
    if (o.placement_union)
        return c == SemClass::VocalFolds || c == SemClass::GlottalSpace;
    return c == o.placement_cls;
}

// Cheap per-task feasibility so a doomed plan fails at compile time with a
// task name instead of burning the retry budget later.
void precheck(const ObjectSpec& o, const CellGrid& bg, int index) {
    const GridGeometry& g = bg.geometry();
    std::string where = "task " + std::to_string(index) + " (" +
                        class_name(o.cls) + "): ";
    switch (o.cls) {
        case SemClass::Pathology: {
            if (eligible_blocks(bg, o.placement_cls, o.block_fraction).empty())
                throw InfeasibleError(where + "no eligible block for pathology");
            break;
        }
        case SemClass::Intubation: {
            for (int y = 0; y < g.width; ++y)
                if (bg.at(g.height - 1, y) == o.placement_cls)
                    return;
            throw InfeasibleError(where +
                                  "no glottal-space access to the bottom border");
        }
        case SemClass::SurgicalTool: {
            for (int y = 0; y < g.width; ++y)
                if (tool_placement(o, bg.at(0, y)) ||
                    tool_placement(o, bg.at(g.height - 1, y)))
                    return;
            for (int x = 0; x < g.height; ++x)
                if (tool_placement(o, bg.at(x, 0)) ||
                    tool_placement(o, bg.at(x, g.width - 1)))
                    return;
            throw InfeasibleError(where + "no eligible border cell for surgical_tool");
        }
        default:
            throw ContractError(where + "not a generatable class");
    }
}

} // namespace

GenerationPlan compile(const SceneSpec& spec, const CellGrid& background,
                       uint64_t master_seed) {
    GenerationPlan plan;
    plan.group = spec.group;
    plan.digest = scene_digest(spec);
    plan.master_seed = master_seed;

    std::vector<ObjectSpec> objects = spec.resolved();
    for (size_t i = 0; i < objects.size(); ++i) {
        precheck(objects[i], background, static_cast<int>(i));
        GenerationTask t;
        t.index = static_cast<int>(i);
        t.object = objects[i];
        t.seed = sub_seed(master_seed, i);
        plan.tasks.push_back(std::move(t));
    }
    return plan;
}

} // namespace laryngen
