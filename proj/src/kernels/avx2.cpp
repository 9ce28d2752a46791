#include "laryngen/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace laryngen::kernels {

namespace avx2 {

#define LARYNGEN_AVX2 __attribute__((target("avx2")))

LARYNGEN_AVX2
size_t count_eq(const uint8_t* data, size_t len, uint8_t value) {
    const __m256i needle = _mm256_set1_epi8(static_cast<char>(value));
    size_t n = 0, i = 0;
    for (; i + 32 <= len; i += 32) {
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i));
        uint32_t m = _mm256_movemask_epi8(_mm256_cmpeq_epi8(v, needle));
        n += __builtin_popcount(m);
    }
    for (; i < len; ++i)
        n += (data[i] == value);
    return n;
}

LARYNGEN_AVX2
size_t count_diff(const uint8_t* a, const uint8_t* b, size_t len) {
    size_t eq = 0, i = 0;
    for (; i + 32 <= len; i += 32) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        uint32_t m = _mm256_movemask_epi8(_mm256_cmpeq_epi8(va, vb));
        eq += __builtin_popcount(m);
    }
    size_t n = i - eq;
    for (; i < len; ++i)
        n += (a[i] != b[i]);
    return n;
}

LARYNGEN_AVX2
void remap(uint8_t* dst, const uint8_t* src, size_t len, const uint8_t* table16) {
    const __m128i t128 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(table16));
    const __m256i table = _mm256_broadcastsi128_si256(t128);
    size_t i = 0;
    for (; i + 32 <= len; i += 32) {
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        // src bytes are < 16, so pshufb is a straight table lookup
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i),
                            _mm256_shuffle_epi8(table, v));
    }
    for (; i < len; ++i)
        dst[i] = table16[src[i]];
}

LARYNGEN_AVX2
size_t classify_rgb(uint8_t* out, const uint8_t* rgb, size_t count,
                    const uint32_t* keys, size_t n_keys) {
    // Gather dwords so lane 0 sees bytes 0..15 and lane 1 bytes 12..27 of a
    // 32-byte load, then shuffle each lane's four 3-byte pixels into
    // 0x00RRGGBB dwords.
    const __m256i lanes = _mm256_setr_epi32(0, 1, 2, 3, 3, 4, 5, 6);
    const __m256i gather = _mm256_setr_epi8(
        2, 1, 0, -1, 5, 4, 3, -1, 8, 7, 6, -1, 11, 10, 9, -1,
        2, 1, 0, -1, 5, 4, 3, -1, 8, 7, 6, -1, 11, 10, 9, -1);
    const __m256i pack = _mm256_setr_epi8(
        0, 4, 8, 12, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1,
        0, 4, 8, 12, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1);
    const __m256i invalid = _mm256_set1_epi32(0xFF);

    // The 32-byte load for pixel group i reads bytes [3i, 3i+32); stay 8
    // pixels plus one spare dword short of the end.
    size_t safe = 0;
    if (count >= 11)
        safe = ((count - 11) / 8) * 8 + 8;

    size_t i = 0;
    for (; i < safe; i += 8) {
        __m256i raw = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(rgb + 3 * i));
        __m256i k = _mm256_shuffle_epi8(_mm256_permutevar8x32_epi32(raw, lanes), gather);

        __m256i cls = invalid;
        for (size_t c = 0; c < n_keys; ++c) {
            __m256i hit = _mm256_cmpeq_epi32(k, _mm256_set1_epi32(static_cast<int>(keys[c])));
            cls = _mm256_blendv_epi8(cls, _mm256_set1_epi32(static_cast<int>(c)), hit);
        }

        uint32_t bad = _mm256_movemask_epi8(_mm256_cmpeq_epi32(cls, invalid));
        if (bad != 0)
            return i + (__builtin_ctz(bad) >> 2);

        __m256i packed = _mm256_shuffle_epi8(cls, pack);
        uint32_t lo = static_cast<uint32_t>(_mm_cvtsi128_si32(_mm256_castsi256_si128(packed)));
        uint32_t hi = static_cast<uint32_t>(_mm_cvtsi128_si32(_mm256_extracti128_si256(packed, 1)));
        __builtin_memcpy(out + i, &lo, 4);
        __builtin_memcpy(out + i + 4, &hi, 4);
    }

    for (; i < count; ++i) {
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

#undef LARYNGEN_AVX2

} // namespace avx2

const Funcs* avx2_funcs() {
    if (!__builtin_cpu_supports("avx2"))
        return nullptr;
    static const Funcs f{avx2::count_eq, avx2::count_diff,
                         avx2::remap, avx2::classify_rgb};
    return &f;
}

} // namespace laryngen::kernels

#else // non-x86: scalar only for now
// TODO: NEON variants once there is ARM hardware to validate against.

namespace laryngen::kernels {

const Funcs* avx2_funcs() {
    return nullptr;
}

} // namespace laryngen::kernels

#endif
