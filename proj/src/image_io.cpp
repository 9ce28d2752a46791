#include "laryngen/image_io.hpp"

#include <zlib.h>

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace laryngen {

namespace {

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw DecodeError("cannot open file: " + path);
    return std::vector<uint8_t>(std::istreambuf_iterator<char>(f),
                                std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const void* data, size_t len) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw Error("cannot open file for writing: " + path);
    f.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
    if (!f)
        throw Error("write failed: " + path);
}

// --- PPM ---

// Skips PPM whitespace/comments and parses a decimal token.
int ppm_int(const std::vector<uint8_t>& d, size_t& i, const std::string& path) {
    while (i < d.size()) {
        if (d[i] == '#') {
            while (i < d.size() && d[i] != '\n')
                ++i;
        } else if (std::isspace(d[i])) {
            ++i;
        } else {
            break;
        }
    }
    if (i >= d.size() || !std::isdigit(d[i]))
        throw DecodeError("malformed PPM header: " + path);
    int v = 0;
    while (i < d.size() && std::isdigit(d[i])) {
        v = v * 10 + (d[i] - '0');
        if (v > 1 << 24)
            throw DecodeError("absurd PPM header value: " + path);
        ++i;
    }
    return v;
}

// --- PNG ---

constexpr uint8_t kPngSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

uint32_t be32(const uint8_t* p) {
    return (uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) | (uint32_t(p[2]) << 8) | p[3];
}

void put_be32(std::vector<uint8_t>& v, uint32_t x) {
    v.push_back(uint8_t(x >> 24));
    v.push_back(uint8_t(x >> 16));
    v.push_back(uint8_t(x >> 8));
    v.push_back(uint8_t(x));
}

void put_chunk(std::vector<uint8_t>& out, const char type[4],
               const uint8_t* data, size_t len) {
    put_be32(out, static_cast<uint32_t>(len));
    size_t start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data, data + len);
    uint32_t crc = crc32(0, out.data() + start, static_cast<uInt>(4 + len));
    put_be32(out, crc);
}

std::vector<uint8_t> zlib_inflate(const uint8_t* data, size_t len, size_t expect) {
    std::vector<uint8_t> out(expect);
    uLongf out_len = expect;
    int rc = uncompress(out.data(), &out_len, data, static_cast<uLong>(len));
    if (rc != Z_OK || out_len != expect)
        throw DecodeError("PNG: corrupt zlib stream");
    return out;
}

std::vector<uint8_t> zlib_deflate(const uint8_t* data, size_t len) {
    uLongf bound = compressBound(static_cast<uLong>(len));
    std::vector<uint8_t> out(bound);
    // Fixed level keeps the encoder byte-deterministic.
    int rc = compress2(out.data(), &bound, data, static_cast<uLong>(len), 6);
    if (rc != Z_OK)
        throw Error("PNG: deflate failed");
    out.resize(bound);
    return out;
}

uint8_t paeth(int a, int b, int c) {
    int p = a + b - c;
    int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc)
        return uint8_t(a);
    if (pb <= pc)
        return uint8_t(b);
    return uint8_t(c);
}

} // namespace

LabelImage read_ppm(const std::string& path) {
    std::vector<uint8_t> d = read_file(path);
    if (d.size() < 2 || d[0] != 'P' || d[1] != '6')
        throw DecodeError("not a binary PPM (P6): " + path);
    size_t i = 2;
    int w = ppm_int(d, i, path);
    int h = ppm_int(d, i, path);
    int maxval = ppm_int(d, i, path);
    if (maxval != 255)
        throw DecodeError("PPM maxval must be 255: " + path);
    ++i; // single whitespace after maxval
    size_t need = 3 * static_cast<size_t>(w) * h;
    if (i + need > d.size())
        throw DecodeError("truncated PPM: " + path);
    LabelImage img;
    img.width = w;
    img.height = h;
    img.pixels.assign(d.begin() + i, d.begin() + i + need);
    return img;
}

void write_ppm(const LabelImage& img, const std::string& path) {
    char header[64];
    int n = std::snprintf(header, sizeof header, "P6\n%d %d\n255\n", img.width, img.height);
    std::vector<uint8_t> out(header, header + n);
    out.insert(out.end(), img.pixels.begin(), img.pixels.end());
    write_file(path, out.data(), out.size());
}

LabelImage read_png(const std::string& path) {
    std::vector<uint8_t> d = read_file(path);
    if (d.size() < 8 || std::memcmp(d.data(), kPngSig, 8) != 0)
        throw DecodeError("not a PNG: " + path);

    uint32_t w = 0, h = 0;
    int bit_depth = 0, color_type = -1, interlace = -1;
    std::vector<uint8_t> idat;
    bool saw_ihdr = false, saw_iend = false;

    size_t i = 8;
    while (i + 12 <= d.size() && !saw_iend) {
        uint32_t len = be32(&d[i]);
        if (i + 12 + len > d.size())
            throw DecodeError("truncated PNG chunk: " + path);
        const uint8_t* type = &d[i + 4];
        const uint8_t* body = &d[i + 8];
        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (len != 13)
                throw DecodeError("bad IHDR: " + path);
            w = be32(body);
            h = be32(body + 4);
            bit_depth = body[8];
            color_type = body[9];
            interlace = body[12];
            saw_ihdr = true;
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), body, body + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            saw_iend = true;
        }
        // ancillary chunks skipped
        i += 12 + len;
    }
    if (!saw_ihdr || !saw_iend)
        throw DecodeError("PNG missing IHDR/IEND: " + path);
    if (bit_depth != 8 || color_type != 2 || interlace != 0)
        throw DecodeError("unsupported PNG (need 8-bit RGB, non-interlaced): " + path);
    if (w == 0 || h == 0 || w > (1u << 20) || h > (1u << 20))
        throw DecodeError("bad PNG dimensions: " + path);

    const size_t stride = 3 * static_cast<size_t>(w);
    std::vector<uint8_t> raw = zlib_inflate(idat.data(), idat.size(), (stride + 1) * h);

    LabelImage img;
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    img.pixels.resize(stride * h);

    std::vector<uint8_t> prev(stride, 0);
    for (size_t row = 0; row < h; ++row) {
        uint8_t filter = raw[row * (stride + 1)];
        const uint8_t* src = &raw[row * (stride + 1) + 1];
        uint8_t* dst = &img.pixels[row * stride];
        for (size_t k = 0; k < stride; ++k) {
            int a = k >= 3 ? dst[k - 3] : 0;       // left
            int b = prev[k];                       // up
            int c = k >= 3 ? prev[k - 3] : 0;      // up-left
            int x = src[k];
            switch (filter) {
                case 0: dst[k] = uint8_t(x); break;
                case 1: dst[k] = uint8_t(x + a); break;
                case 2: dst[k] = uint8_t(x + b); break;
                case 3: dst[k] = uint8_t(x + (a + b) / 2); break;
                case 4: dst[k] = uint8_t(x + paeth(a, b, c)); break;
                default: throw DecodeError("bad PNG filter byte: " + path);
            }
        }
        std::memcpy(prev.data(), dst, stride);
    }
    return img;
}

void write_png(const LabelImage& img, const std::string& path) {
    const size_t stride = 3 * static_cast<size_t>(img.width);

    // Filter 0 everywhere: label maps are long runs of identical pixels,
    // which deflate already handles well.
    std::vector<uint8_t> raw((stride + 1) * img.height);
    for (int row = 0; row < img.height; ++row) {
        raw[row * (stride + 1)] = 0;
        std::memcpy(&raw[row * (stride + 1) + 1], &img.pixels[row * stride], stride);
    }
    std::vector<uint8_t> z = zlib_deflate(raw.data(), raw.size());

    std::vector<uint8_t> out(kPngSig, kPngSig + 8);
    uint8_t ihdr[13];
    ihdr[0] = uint8_t(uint32_t(img.width) >> 24);
    ihdr[1] = uint8_t(uint32_t(img.width) >> 16);
    ihdr[2] = uint8_t(uint32_t(img.width) >> 8);
    ihdr[3] = uint8_t(img.width);
    ihdr[4] = uint8_t(uint32_t(img.height) >> 24);
    ihdr[5] = uint8_t(uint32_t(img.height) >> 16);
    ihdr[6] = uint8_t(uint32_t(img.height) >> 8);
    ihdr[7] = uint8_t(img.height);
    ihdr[8] = 8;  // bit depth
    ihdr[9] = 2;  // RGB
    ihdr[10] = ihdr[11] = ihdr[12] = 0;
    put_chunk(out, "IHDR", ihdr, 13);
    put_chunk(out, "IDAT", z.data(), z.size());
    put_chunk(out, "IEND", nullptr, 0);
    write_file(path, out.data(), out.size());
}

bool has_image_extension(const std::string& path) {
    std::string ext = std::filesystem::path(path).extension().string();
    return ext == ".ppm" || ext == ".png";
}

LabelImage read_image(const std::string& path) {
    std::string ext = std::filesystem::path(path).extension().string();
    if (ext == ".ppm")
        return read_ppm(path);
    if (ext == ".png")
        return read_png(path);
    throw DecodeError("unsupported image extension (want .ppm or .png): " + path);
}

void write_image(const LabelImage& img, const std::string& path) {
    std::string ext = std::filesystem::path(path).extension().string();
    if (ext == ".ppm")
        return write_ppm(img, path);
    if (ext == ".png")
        return write_png(img, path);
    throw Error("unsupported image extension (want .ppm or .png): " + path);
}

void write_image_atomic(const LabelImage& img, const std::string& path) {
    std::string ext = std::filesystem::path(path).extension().string();
    std::string tmp = path + ".tmp";
    if (ext == ".ppm")
        write_ppm(img, tmp);
    else if (ext == ".png")
        write_png(img, tmp);
    else
        throw Error("unsupported image extension (want .ppm or .png): " + path);
    std::filesystem::rename(tmp, path);
}

void write_text_atomic(const std::string& text, const std::string& path) {
    std::string tmp = path + ".tmp";
    write_file(tmp, text.data(), text.size());
    std::filesystem::rename(tmp, path);
}

} // namespace laryngen
