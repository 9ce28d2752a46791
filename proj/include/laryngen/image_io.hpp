#pragma once

#include <string>
#include <vector>

#include "laryngen/label_image.hpp"

namespace laryngen {

// Binary PPM (P6, maxval 255).
LabelImage read_ppm(const std::string& path);
void write_ppm(const LabelImage& img, const std::string& path);

// 8-bit RGB PNG (color type 2, non-interlaced). The encoder is
// deterministic: identical images produce identical files.
LabelImage read_png(const std::string& path);
void write_png(const LabelImage& img, const std::string& path);

bool has_image_extension(const std::string& path);

// Dispatch on extension (.ppm / .png).
LabelImage read_image(const std::string& path);
void write_image(const LabelImage& img, const std::string& path);

// write_image + rename, so concurrent writers never expose partial files.
void write_image_atomic(const LabelImage& img, const std::string& path);
void write_text_atomic(const std::string& text, const std::string& path);

} // namespace laryngen
