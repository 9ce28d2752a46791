#pragma once

#include <cstddef>
#include <cstdint>

// Byte kernels behind the grid/palette hot loops: per-block class counting,
// label remapping, grid diffing, and RGB->class classification. Each has a
// scalar reference implementation and an AVX2 variant; the active set is
// chosen once at runtime. Variants must be bit-for-bit equivalent to the
// reference (enforced by tests), so dispatch never affects output bytes.

namespace laryngen::kernels {

inline constexpr size_t npos = static_cast<size_t>(-1);

struct Funcs {
    // Number of bytes equal to `value`.
    size_t (*count_eq)(const uint8_t* data, size_t len, uint8_t value);

    // Number of positions where a[i] != b[i].
    size_t (*count_diff)(const uint8_t* a, const uint8_t* b, size_t len);

    // dst[i] = table[src[i]]; every src byte must be < 16.
    void (*remap)(uint8_t* dst, const uint8_t* src, size_t len,
                  const uint8_t* table16);

    // Classify packed 24-bit RGB pixels against up to 16 distinct palette
    // keys (key = R<<16 | G<<8 | B). Writes one class byte per pixel.
    // Returns npos on full success, else the index of the first unmatched
    // pixel (out[] contents beyond that index are unspecified).
    size_t (*classify_rgb)(uint8_t* out, const uint8_t* rgb, size_t count,
                           const uint32_t* keys, size_t n_keys);
};

enum class Isa { Scalar, Avx2 };

const char* isa_name(Isa isa);

// Active kernel set. Detected once on first use; honors LARYNGEN_SIMD=scalar|avx2.
const Funcs& active();
Isa active_isa();

// Force a set. Returns false (and leaves the active set unchanged) if the
// requested ISA is unsupported on this CPU.
bool select(Isa isa);

// Direct access for equivalence tests.
const Funcs& scalar_funcs();
const Funcs* avx2_funcs(); // nullptr when the CPU lacks AVX2

inline size_t count_eq(const uint8_t* data, size_t len, uint8_t value) {
    return active().count_eq(data, len, value);
}
inline size_t count_diff(const uint8_t* a, const uint8_t* b, size_t len) {
    return active().count_diff(a, b, len);
}
inline void remap(uint8_t* dst, const uint8_t* src, size_t len, const uint8_t* table16) {
    active().remap(dst, src, len, table16);
}
inline size_t classify_rgb(uint8_t* out, const uint8_t* rgb, size_t count,
                           const uint32_t* keys, size_t n_keys) {
    return active().classify_rgb(out, rgb, count, keys, n_keys);
}

} // namespace laryngen::kernels
