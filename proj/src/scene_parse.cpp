#include "laryngen/scene.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace laryngen {

ObjectSpec ObjectSpec::defaults(SemClass cls) {
    ObjectSpec o;
    o.cls = cls;
    switch (cls) {
        case SemClass::Pathology:
            o.placement_cls = SemClass::VocalFolds;
            break;
        case SemClass::Intubation:
            o.placement_cls = SemClass::GlottalSpace;
            break;
        case SemClass::SurgicalTool:
            o.placement_union = true; // vocal folds or glottal space
            o.placement_cls = SemClass::VocalFolds;
            break;
        default:
            throw ContractError(std::string("'") + class_name(cls) +
                                "' is not a generatable class");
    }
    return o;
}

const char* parse_error_kind_name(ParseErrorKind k) {
    switch (k) {
        case ParseErrorKind::Syntax: return "syntax";
        case ParseErrorKind::UnknownClass: return "unknown-class";
        case ParseErrorKind::DuplicateField: return "duplicate-field";
        case ParseErrorKind::Constraint: return "constraint";
    }
    return "?";
}

namespace {

enum class Tok { Ident, Number, LBrace, RBrace, Eq, Semi, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    double number = 0.0;
    bool is_int = false;
    long long int_value = 0;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        skip_ws();
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= text_.size()) {
            t.kind = Tok::End;
            return t;
        }
        char c = text_[pos_];
        if (c == '{') return punct(t, Tok::LBrace, "{");
        if (c == '}') return punct(t, Tok::RBrace, "}");
        if (c == '=') return punct(t, Tok::Eq, "=");
        if (c == ';') return punct(t, Tok::Semi, ";");
        if (is_ident_start(c)) {
            size_t start = pos_;
            while (pos_ < text_.size() && is_ident_char(text_[pos_]))
                advance();
            t.kind = Tok::Ident;
            t.text = text_.substr(start, pos_ - start);
            return t;
        }
        if (is_digit(c) || c == '-') {
            size_t start = pos_;
            if (c == '-')
                advance();
            bool any_digit = false, is_float = false;
            while (pos_ < text_.size() && is_digit(text_[pos_])) {
                advance();
                any_digit = true;
            }
            if (pos_ < text_.size() && text_[pos_] == '.') {
                is_float = true;
                advance();
                while (pos_ < text_.size() && is_digit(text_[pos_])) {
                    advance();
                    any_digit = true;
                }
            }
            if (!any_digit)
                throw ParseError(ParseErrorKind::Syntax, t.line, t.col,
                                 "malformed number");
            t.kind = Tok::Number;
            t.text = text_.substr(start, pos_ - start);
            t.is_int = !is_float;
            if (is_float) {
                auto rc = std::from_chars(t.text.data(), t.text.data() + t.text.size(),
                                          t.number);
                if (rc.ec != std::errc())
                    throw ParseError(ParseErrorKind::Syntax, t.line, t.col,
                                     "malformed number");
            } else {
                auto rc = std::from_chars(t.text.data(), t.text.data() + t.text.size(),
                                          t.int_value);
                if (rc.ec != std::errc())
                    throw ParseError(ParseErrorKind::Syntax, t.line, t.col,
                                     "integer out of range");
                t.number = static_cast<double>(t.int_value);
            }
            return t;
        }
        throw ParseError(ParseErrorKind::Syntax, line_, col_,
                         std::string("unexpected character '") +
                             (std::isprint(static_cast<unsigned char>(c)) ? std::string(1, c)
                                                                          : "\\x" + hex(c)) +
                             "'");
    }

private:
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_ident_start(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    }
    static bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

    static std::string hex(char c) {
        char buf[3];
        std::snprintf(buf, sizeof buf, "%02x", static_cast<unsigned char>(c));
        return buf;
    }

    Token punct(Token& t, Tok kind, const char* text) {
        t.kind = kind;
        t.text = text;
        advance();
        return t;
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                break;
            }
        }
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

struct FieldInfo {
    const char* name;
    bool pathology, intubation, tool;
    bool is_class_value;
};

constexpr FieldInfo kFields[] = {
    {"placement", true, true, true, true},
    // the intubation semi-contour is fixed to the upper half-lines of the
    // 8-direction scheme, so its pivot count is not configurable
    {"pivots", true, false, false, false},
    {"min_pivot_dist", true, true, false, false},
    {"max_pivot_dist", true, true, false, false},
    {"center_margin", true, true, false, false},
    {"block_fraction", true, false, false, false},
    {"rect_padding", true, true, false, false},
    {"bottom_band", false, true, false, false},
    {"half_width", false, false, true, false},
    {"min_length", false, false, true, false},
    {"max_length", false, false, true, false},
};

const FieldInfo* find_field(const std::string& name) {
    for (const auto& f : kFields)
        if (name == f.name)
            return &f;
    return nullptr;
}

bool field_applies(const FieldInfo& f, SemClass cls) {
    switch (cls) {
        case SemClass::Pathology: return f.pathology;
        case SemClass::Intubation: return f.intubation;
        case SemClass::SurgicalTool: return f.tool;
        default: return false;
    }
}

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) { shift(); }

    SceneSpec parse() {
        expect_ident("scene");
        Token scene_tok = prev_;
        expect(Tok::LBrace, "'{'");

        SceneSpec spec;
        while (cur_.kind != Tok::RBrace) {
            if (cur_.kind == Tok::End)
                throw err(ParseErrorKind::Syntax, cur_, "unexpected end of input, expected '}'");
            if (cur_.kind != Tok::Ident)
                throw err(ParseErrorKind::Syntax, cur_,
                          "expected 'group', 'object' or '}', got '" + cur_.text + "'");
            if (cur_.text == "group") {
                Token key = cur_;
                shift();
                expect(Tok::Eq, "'='");
                Token val = expect_int("group number");
                expect(Tok::Semi, "';'");
                if (spec.group)
                    throw err(ParseErrorKind::DuplicateField, key, "duplicate 'group'");
                if (val.int_value < 1 || val.int_value > 5)
                    throw err(ParseErrorKind::Constraint, val,
                              "group must be between 1 and 5");
                spec.group = static_cast<int>(val.int_value);
            } else if (cur_.text == "object") {
                spec.objects.push_back(parse_object());
            } else {
                throw err(ParseErrorKind::Syntax, cur_,
                          "expected 'group' or 'object', got '" + cur_.text + "'");
            }
        }
        shift(); // '}'
        if (cur_.kind != Tok::End)
            throw err(ParseErrorKind::Syntax, cur_, "trailing input after scene block");
        if (!spec.group && spec.objects.empty())
            throw err(ParseErrorKind::Constraint, scene_tok,
                      "scene has no objects and no group template");
        return spec;
    }

private:
    ObjectSpec parse_object() {
        Token obj_tok = cur_;
        shift(); // 'object'
        if (cur_.kind != Tok::Ident)
            throw err(ParseErrorKind::Syntax, cur_, "expected object class name");
        SemClass cls;
        if (!class_from_name(cur_.text, cls))
            throw err(ParseErrorKind::UnknownClass, cur_,
                      "unknown class '" + cur_.text + "'");
        if (cls != SemClass::Pathology && cls != SemClass::Intubation &&
            cls != SemClass::SurgicalTool)
            throw err(ParseErrorKind::Constraint, cur_,
                      std::string("'") + class_name(cls) + "' cannot be generated");
        if (cls == SemClass::Pathology) {
            if (have_pathology_)
                throw err(ParseErrorKind::Constraint, cur_,
                          "at most one pathology object per scene");
            have_pathology_ = true;
        }
        if (cls == SemClass::Intubation) {
            if (have_intubation_)
                throw err(ParseErrorKind::Constraint, cur_,
                          "at most one intubation object per scene");
            have_intubation_ = true;
        }
        shift();
        expect(Tok::LBrace, "'{'");

        ObjectSpec obj = ObjectSpec::defaults(cls);
        std::vector<std::string> seen;
        while (cur_.kind != Tok::RBrace) {
            if (cur_.kind == Tok::End)
                throw err(ParseErrorKind::Syntax, cur_,
                          "unexpected end of input inside object block");
            if (cur_.kind != Tok::Ident)
                throw err(ParseErrorKind::Syntax, cur_,
                          "expected field name or '}', got '" + cur_.text + "'");
            Token key = cur_;
            const FieldInfo* field = find_field(key.text);
            if (!field)
                throw err(ParseErrorKind::Syntax, key, "unknown field '" + key.text + "'");
            if (!field_applies(*field, cls))
                throw err(ParseErrorKind::Constraint, key,
                          "field '" + key.text + "' does not apply to " + class_name(cls));
            for (const auto& s : seen)
                if (s == key.text)
                    throw err(ParseErrorKind::DuplicateField, key,
                              "duplicate field '" + key.text + "'");
            seen.push_back(key.text);
            shift();
            expect(Tok::Eq, "'='");
            set_field(obj, *field, key);
            expect(Tok::Semi, "';'");
        }
        shift(); // '}'
        validate_object(obj, obj_tok);
        return obj;
    }

    void set_field(ObjectSpec& obj, const FieldInfo& field, const Token& key) {
        if (field.is_class_value) {
            if (cur_.kind != Tok::Ident)
                throw err(ParseErrorKind::Syntax, cur_, "expected class name");
            SemClass place;
            if (!class_from_name(cur_.text, place))
                throw err(ParseErrorKind::UnknownClass, cur_,
                          "unknown class '" + cur_.text + "'");
            if (place != SemClass::VocalFolds && place != SemClass::GlottalSpace &&
                place != SemClass::OtherTissue)
                throw err(ParseErrorKind::Constraint, cur_,
                          "placement must be a background class");
            obj.placement_cls = place;
            obj.placement_union = false;
            shift();
            return;
        }
        std::string name = key.text;
        if (name == "block_fraction") {
            Token val = expect_number("a number");
            if (val.number <= 0.0 || val.number > 1.0)
                throw err(ParseErrorKind::Constraint, val,
                          "block_fraction must be in (0, 1]");
            obj.block_fraction = val.number;
            return;
        }
        Token val = expect_int("an integer");
        long long v = val.int_value;
        auto check = [&](bool ok, const char* msg) {
            if (!ok)
                throw err(ParseErrorKind::Constraint, val, msg);
        };
        if (name == "pivots") {
            check(v >= 4, "pivot count must be at least 4");
            check(v % 2 == 0, "pivot count must be even");
            check(v <= 64, "pivot count must be at most 64");
            obj.pivot_count = static_cast<int>(v);
        } else if (name == "min_pivot_dist") {
            check(v >= 1, "min_pivot_dist must be at least 1");
            obj.min_pivot_dist = static_cast<int>(v);
        } else if (name == "max_pivot_dist") {
            check(v >= 1, "max_pivot_dist must be at least 1");
            obj.max_pivot_dist = static_cast<int>(v);
        } else if (name == "center_margin") {
            check(v >= 0, "center_margin must be non-negative");
            obj.center_margin = static_cast<int>(v);
        } else if (name == "rect_padding") {
            check(v >= 0, "rect_padding must be non-negative");
            obj.rect_padding = static_cast<int>(v);
        } else if (name == "bottom_band") {
            check(v >= 1, "bottom_band must be at least 1");
            obj.bottom_band = static_cast<int>(v);
        } else if (name == "half_width") {
            check(v >= 1, "half_width must be at least 1");
            obj.half_width = static_cast<int>(v);
        } else if (name == "min_length") {
            check(v >= 1, "min_length must be at least 1");
            obj.min_length = static_cast<int>(v);
        } else if (name == "max_length") {
            check(v >= 1, "max_length must be at least 1");
            obj.max_length = static_cast<int>(v);
        } else {
            throw err(ParseErrorKind::Syntax, key, "unknown field '" + name + "'");
        }
    }

    void validate_object(const ObjectSpec& obj, const Token& at) {
        if (obj.max_pivot_dist <= obj.min_pivot_dist)
            throw err(ParseErrorKind::Constraint, at,
                      "max_pivot_dist must be greater than min_pivot_dist");
        if (obj.cls == SemClass::SurgicalTool && obj.max_length < obj.min_length)
            throw err(ParseErrorKind::Constraint, at,
                      "max_length must be at least min_length");
    }

    Token expect_int(const char* what) {
        if (cur_.kind != Tok::Number || !cur_.is_int)
            throw err(ParseErrorKind::Syntax, cur_,
                      std::string("expected ") + what + ", got '" + cur_.text + "'");
        Token t = cur_;
        shift();
        return t;
    }

    Token expect_number(const char* what) {
        if (cur_.kind != Tok::Number)
            throw err(ParseErrorKind::Syntax, cur_,
                      std::string("expected ") + what + ", got '" + cur_.text + "'");
        Token t = cur_;
        shift();
        return t;
    }

    void expect(Tok kind, const char* what) {
        if (cur_.kind != kind)
            throw err(ParseErrorKind::Syntax, cur_,
                      std::string("expected ") + what +
                          (cur_.kind == Tok::End ? ", got end of input"
                                                 : ", got '" + cur_.text + "'"));
        shift();
    }

    void expect_ident(const char* word) {
        if (cur_.kind != Tok::Ident || cur_.text != word)
            throw err(ParseErrorKind::Syntax, cur_,
                      std::string("expected '") + word + "'" +
                          (cur_.kind == Tok::End ? ", got end of input"
                                                 : ", got '" + cur_.text + "'"));
        shift();
    }

    static ParseError err(ParseErrorKind kind, const Token& t, const std::string& msg) {
        return ParseError(kind, t.line, t.col, msg);
    }

    void shift() {
        prev_ = cur_;
        cur_ = lex_.next();
    }

    Lexer lex_;
    Token cur_, prev_;
    bool have_pathology_ = false;
    bool have_intubation_ = false;
};

std::string format_double(double v) {
    char buf[32];
    auto rc = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, rc.ptr);
}

int class_rank(SemClass c) {
    switch (c) {
        case SemClass::Pathology: return 0;
        case SemClass::Intubation: return 1;
        case SemClass::SurgicalTool: return 2;
        default: return 3;
    }
}

} // namespace

SceneSpec parse_scene_spec(const std::string& text) {
    return Parser(text).parse();
}

SceneSpec load_scene_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw Error("cannot open scene file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_scene_spec(ss.str());
}

std::vector<ObjectSpec> expand_group_template(int group) {
    auto obj = [](SemClass c) { return ObjectSpec::defaults(c); };
    switch (group) {
        case 1: // pre-operative, tumor only
            return {obj(SemClass::Pathology)};
        case 2: // tumor with instruments and intubation
            return {obj(SemClass::Pathology), obj(SemClass::Intubation),
                    obj(SemClass::SurgicalTool)};
        case 3: // post-operative, intubation only
            return {obj(SemClass::Intubation)};
        case 4: // manipulation: instruments and intubation
            return {obj(SemClass::Intubation), obj(SemClass::SurgicalTool)};
        case 5: // same label-level content as group 4 (blood and dressing
                // have no class in the 7-class label space)
            return {obj(SemClass::Intubation), obj(SemClass::SurgicalTool)};
        default:
            throw ContractError("group must be between 1 and 5");
    }
}

std::vector<ObjectSpec> SceneSpec::resolved() const {
    std::vector<ObjectSpec> out;
    if (group)
        out = expand_group_template(*group);
    std::vector<bool> overridden(out.size(), false);
    for (const ObjectSpec& o : objects) {
        bool replaced = false;
        for (size_t i = 0; i < out.size(); ++i) {
            if (!overridden[i] && out[i].cls == o.cls) {
                out[i] = o;
                overridden[i] = true;
                replaced = true;
                break;
            }
        }
        if (!replaced) {
            out.push_back(o);
            overridden.push_back(true);
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const ObjectSpec& a, const ObjectSpec& b) {
        return class_rank(a.cls) < class_rank(b.cls);
    });
    if (out.empty())
        throw ContractError("scene resolves to no objects");
    return out;
}

std::string pretty_print(const SceneSpec& spec) {
    std::ostringstream out;
    out << "scene {\n";
    if (spec.group)
        out << "  group = " << *spec.group << ";\n";
    for (const ObjectSpec& o : spec.objects) {
        out << "  object " << class_name(o.cls) << " {\n";
        if (!o.placement_union)
            out << "    placement = " << class_name(o.placement_cls) << ";\n";
        if (o.cls == SemClass::Pathology)
            out << "    pivots = " << o.pivot_count << ";\n";
        if (o.cls != SemClass::SurgicalTool) {
            out << "    min_pivot_dist = " << o.min_pivot_dist << ";\n";
            out << "    max_pivot_dist = " << o.max_pivot_dist << ";\n";
            out << "    center_margin = " << o.center_margin << ";\n";
            out << "    rect_padding = " << o.rect_padding << ";\n";
        }
        if (o.cls == SemClass::Pathology)
            out << "    block_fraction = " << format_double(o.block_fraction) << ";\n";
        if (o.cls == SemClass::Intubation)
            out << "    bottom_band = " << o.bottom_band << ";\n";
        if (o.cls == SemClass::SurgicalTool) {
            out << "    half_width = " << o.half_width << ";\n";
            out << "    min_length = " << o.min_length << ";\n";
            out << "    max_length = " << o.max_length << ";\n";
        }
        out << "  }\n";
    }
    out << "}\n";
    return out.str();
}

std::string scene_digest(const SceneSpec& spec) {
    std::string text = pretty_print(spec);
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace laryngen
