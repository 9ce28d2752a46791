#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "laryngen/grid.hpp"

namespace laryngen {

// One object to synthesise. Defaults are per-class; the DSL overrides fields.
struct ObjectSpec {
    SemClass cls = SemClass::Pathology;
    SemClass placement_cls = SemClass::VocalFolds;
    // Surgical tools may sit on vocal folds and in the glottal space; when
    // placement is the default union this is true and placement_cls unused.
    bool placement_union = false;

    int pivot_count = 8;      // even, >= 4
    int min_pivot_dist = 4;   // cells, >= 1
    int max_pivot_dist = 24;  // cells, > min
    int center_margin = 16;   // cells
    double block_fraction = 1.0; // eligibility threshold for block choice
    int rect_padding = 0;     // dilation of pivot-pair bounding rectangles

    // Intubation: center band height, lowest rows of the glottal region.
    int bottom_band = 48;

    // Surgical tool rod model.
    int half_width = 6;
    int min_length = 64;
    int max_length = 200;

    static ObjectSpec defaults(SemClass cls);

    bool operator==(const ObjectSpec&) const = default;
};

// Parsed scene description: an optional group template (1..5) plus explicit
// objects. Explicit objects override the template entry of the same class.
struct SceneSpec {
    std::optional<int> group;
    std::vector<ObjectSpec> objects;

    // Template-expanded, override-merged object list, ordered
    // Pathology < Intubation < SurgicalTool.
    std::vector<ObjectSpec> resolved() const;

    bool operator==(const SceneSpec&) const = default;
};

enum class ParseErrorKind { Syntax, UnknownClass, DuplicateField, Constraint };

// The one way scene parsing fails: a located diagnostic.
class ParseError : public Error {
public:
    ParseError(ParseErrorKind kind, int line, int col, const std::string& msg)
        : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
          kind_(kind), line_(line), col_(col), msg_(msg) {}

    ParseErrorKind kind() const { return kind_; }
    int line() const { return line_; }
    int col() const { return col_; }
    const std::string& message() const { return msg_; }

private:
    ParseErrorKind kind_;
    int line_;
    int col_;
    std::string msg_;
};

const char* parse_error_kind_name(ParseErrorKind k);

// Grammar (EBNF in docs/scene-grammar.ebnf):
//   scene { group = N; object <class> { key = value; ... } ... }
// Total: every input either parses or raises exactly one ParseError.
SceneSpec parse_scene_spec(const std::string& text);
SceneSpec load_scene_file(const std::string& path);

// Canonical text form; parse(pretty_print(s)) == s up to default
// materialisation, and pretty_print of that parse is a fixpoint.
std::string pretty_print(const SceneSpec& spec);

// Class-presence templates for the five dataset groups.
std::vector<ObjectSpec> expand_group_template(int group);

// Stable digest of the canonical text, echoed in metadata.
std::string scene_digest(const SceneSpec& spec);

// --- compiled plan ---

struct GenerationTask {
    int index = 0;
    ObjectSpec object;
    uint64_t seed = 0;
};

struct GenerationPlan {
    std::optional<int> group;
    std::string digest;
    uint64_t master_seed = 0;
    std::vector<GenerationTask> tasks;
};

// Orders tasks, derives per-task sub-seeds, and pre-checks feasibility of
// every task against the (already stripped) background grid. Raises
// InfeasibleError naming the first impossible task.
GenerationPlan compile(const SceneSpec& spec, const CellGrid& background,
                       uint64_t master_seed);

} // namespace laryngen
