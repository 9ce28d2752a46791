#include "laryngen/kernels.hpp"

#include <cassert>

// Reference kernels. Written for clarity; these define the contract the
// SIMD variants are tested against.

namespace laryngen::kernels {

namespace scalar {

size_t count_eq(const uint8_t* data, size_t len, uint8_t value) {
    size_t n = 0;
    for (size_t i = 0; i < len; ++i)
        n += (data[i] == value);
    return n;
}

size_t count_diff(const uint8_t* a, const uint8_t* b, size_t len) {
    size_t n = 0;
    for (size_t i = 0; i < len; ++i)
        n += (a[i] != b[i]);
    return n;
}

void remap(uint8_t* dst, const uint8_t* src, size_t len, const uint8_t* table16) {
    for (size_t i = 0; i < len; ++i) {
        assert(src[i] < 16);
        dst[i] = table16[src[i]];
    }
}

size_t classify_rgb(uint8_t* out, const uint8_t* rgb, size_t count,
                    const uint32_t* keys, size_t n_keys) {
    for (size_t i = 0; i < count; ++i) {
        const uint8_t* p = rgb + 3 * i;
        uint32_t key = (uint32_t(p[0]) << 16) | (uint32_t(p[1]) << 8) | p[2];
        size_t c = 0;
        while (c < n_keys && keys[c] != key)
            ++c;
        if (c == n_keys)
            return i;
        out[i] = static_cast<uint8_t>(c);
    }
    return npos;
}

} // namespace scalar

const Funcs& scalar_funcs() {
    static const Funcs f{scalar::count_eq, scalar::count_diff,
                         scalar::remap, scalar::classify_rgb};
    return f;
}

} // namespace laryngen::kernels
