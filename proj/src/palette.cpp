#include "laryngen/palette.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace laryngen {

std::string rgb_to_string(Rgb c) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%u,%u,%u", c.r, c.g, c.b);
    return buf;
}

ClassPalette ClassPalette::defaults() {
    ClassPalette p;
    p.colors_[static_cast<size_t>(SemClass::Void)] = {128, 128, 128};
    p.colors_[static_cast<size_t>(SemClass::VocalFolds)] = {128, 255, 128};
    p.colors_[static_cast<size_t>(SemClass::OtherTissue)] = {0, 128, 0};
    p.colors_[static_cast<size_t>(SemClass::GlottalSpace)] = {0, 0, 255};
    p.colors_[static_cast<size_t>(SemClass::Pathology)] = {128, 0, 255};
    p.colors_[static_cast<size_t>(SemClass::SurgicalTool)] = {255, 0, 0};
    p.colors_[static_cast<size_t>(SemClass::Intubation)] = {255, 255, 0};
    return p;
}

void ClassPalette::check_injective() const {
    for (size_t i = 0; i < kNumClasses; ++i)
        for (size_t j = i + 1; j < kNumClasses; ++j)
            if (colors_[i] == colors_[j])
                throw ContractError(std::string("palette colors collide: ") +
                                    class_name(static_cast<SemClass>(i)) + " and " +
                                    class_name(static_cast<SemClass>(j)) + " are both " +
                                    rgb_to_string(colors_[i]));
}

ClassPalette ClassPalette::parse(const std::string& text) {
    ClassPalette p;
    std::array<bool, kNumClasses> seen{};

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string name, eq;
        if (!(ls >> name))
            continue; // blank
        if (!(ls >> eq) || eq != "=")
            throw DecodeError("palette line " + std::to_string(lineno) +
                              ": expected 'class = R,G,B'");
        SemClass cls;
        if (!class_from_name(name, cls))
            throw DecodeError("palette line " + std::to_string(lineno) +
                              ": unknown class '" + name + "'");
        if (seen[static_cast<size_t>(cls)])
            throw DecodeError("palette line " + std::to_string(lineno) +
                              ": duplicate class '" + name + "'");
        int r, g, b;
        char c1, c2;
        if (!(ls >> r >> c1 >> g >> c2 >> b) || c1 != ',' || c2 != ',' ||
            r < 0 || r > 255 || g < 0 || g > 255 || b < 0 || b > 255)
            throw DecodeError("palette line " + std::to_string(lineno) +
                              ": bad color triple");
        std::string rest;
        if (ls >> rest)
            throw DecodeError("palette line " + std::to_string(lineno) +
                              ": trailing junk '" + rest + "'");
        p.colors_[static_cast<size_t>(cls)] = {uint8_t(r), uint8_t(g), uint8_t(b)};
        seen[static_cast<size_t>(cls)] = true;
    }
    for (size_t i = 0; i < kNumClasses; ++i)
        if (!seen[i])
            throw DecodeError(std::string("palette is missing class '") +
                              class_name(static_cast<SemClass>(i)) + "'");
    p.check_injective();
    return p;
}

ClassPalette ClassPalette::load_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw DecodeError("cannot open palette file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

bool ClassPalette::classify(Rgb c, SemClass& out) const {
    for (size_t i = 0; i < kNumClasses; ++i) {
        if (colors_[i] == c) {
            out = static_cast<SemClass>(i);
            return true;
        }
    }
    return false;
}

bool ClassPalette::classify_snap(Rgb c, int max_dist, SemClass& out) const {
    int best = 256;
    size_t best_i = 0;
    for (size_t i = 0; i < kNumClasses; ++i) {
        int d = std::max({std::abs(int(colors_[i].r) - int(c.r)),
                          std::abs(int(colors_[i].g) - int(c.g)),
                          std::abs(int(colors_[i].b) - int(c.b))});
        if (d < best) {
            best = d;
            best_i = i;
        }
    }
    if (best > max_dist)
        return false;
    out = static_cast<SemClass>(best_i);
    return true;
}

std::string ClassPalette::format() const {
    std::string out;
    for (size_t i = 0; i < kNumClasses; ++i) {
        out += class_name(static_cast<SemClass>(i));
        out += " = ";
        out += rgb_to_string(colors_[i]);
        out += '\n';
    }
    return out;
}

} // namespace laryngen
