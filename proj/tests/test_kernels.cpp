#include <doctest.h>

#include <algorithm>
#include <vector>

#include "laryngen/kernels.hpp"
#include "laryngen/rng.hpp"

using namespace laryngen;
namespace k = laryngen::kernels;

namespace {

std::vector<uint8_t> random_bytes(Rng& rng, size_t n, uint8_t max_value) {
    std::vector<uint8_t> v(n);
    for (auto& b : v)
        b = static_cast<uint8_t>(rng.bounded(max_value + 1));
    return v;
}

} // namespace

TEST_CASE("scalar kernels match naive definitions") {
    Rng rng(7);
    const auto& f = k::scalar_funcs();
    for (int trial = 0; trial < 20; ++trial) {
        size_t n = rng.bounded(300);
        auto a = random_bytes(rng, n, 6);
        auto b = random_bytes(rng, n, 6);
        uint8_t needle = static_cast<uint8_t>(rng.bounded(7));

        CHECK(f.count_eq(a.data(), n, needle) ==
              static_cast<size_t>(std::count(a.begin(), a.end(), needle)));

        size_t diffs = 0;
        for (size_t i = 0; i < n; ++i)
            diffs += a[i] != b[i];
        CHECK(f.count_diff(a.data(), b.data(), n) == diffs);

        uint8_t table[16];
        for (int i = 0; i < 16; ++i)
            table[i] = static_cast<uint8_t>(rng.bounded(7));
        std::vector<uint8_t> dst(n);
        f.remap(dst.data(), a.data(), n, table);
        for (size_t i = 0; i < n; ++i)
            CHECK(dst[i] == table[a[i]]);
    }
}

TEST_CASE("scalar classify_rgb maps keys and reports the first miss") {
    const auto& f = k::scalar_funcs();
    uint32_t keys[3] = {0xff0000, 0x00ff00, 0x0000ff};
    std::vector<uint8_t> rgb = {255, 0, 0, 0, 255, 0, 0, 0, 255, 255, 0, 0};
    std::vector<uint8_t> out(4);
    CHECK(f.classify_rgb(out.data(), rgb.data(), 4, keys, 3) == k::npos);
    CHECK(out == std::vector<uint8_t>{0, 1, 2, 0});

    rgb[7] = 7; // corrupt pixel 2
    CHECK(f.classify_rgb(out.data(), rgb.data(), 4, keys, 3) == 2);
}

#if defined(__x86_64__) || defined(_M_X64)

TEST_CASE("avx2 kernels are bit-equivalent to the scalar reference") {
    const k::Funcs* avx2 = k::avx2_funcs();
    if (!avx2) {
        MESSAGE("AVX2 not available on this CPU; skipping equivalence");
        return;
    }
    const auto& ref = k::scalar_funcs();
    Rng rng(13);

    // lengths straddling the 32-byte vector width and both loop tails
    for (size_t n : {size_t(0), size_t(1), size_t(31), size_t(32), size_t(33),
                     size_t(64), size_t(100), size_t(1023), size_t(4096),
                     size_t(262144)}) {
        auto a = random_bytes(rng, n, 6);
        auto b = a;
        for (size_t i = 0; i < n; i += 37)
            b[i] = static_cast<uint8_t>(rng.bounded(7));

        for (uint8_t needle = 0; needle < 7; ++needle)
            CHECK(avx2->count_eq(a.data(), n, needle) == ref.count_eq(a.data(), n, needle));
        CHECK(avx2->count_diff(a.data(), b.data(), n) == ref.count_diff(a.data(), b.data(), n));

        uint8_t table[16];
        for (int i = 0; i < 16; ++i)
            table[i] = static_cast<uint8_t>(rng.bounded(16));
        std::vector<uint8_t> d1(n), d2(n);
        ref.remap(d1.data(), a.data(), n, table);
        avx2->remap(d2.data(), a.data(), n, table);
        CHECK(d1 == d2);
    }
}

TEST_CASE("avx2 classify_rgb equals scalar, including failure positions") {
    const k::Funcs* avx2 = k::avx2_funcs();
    if (!avx2)
        return;
    const auto& ref = k::scalar_funcs();
    Rng rng(99);

    uint32_t keys[7];
    for (int i = 0; i < 7; ++i)
        keys[i] = static_cast<uint32_t>(rng.bounded(1 << 24));
    std::sort(keys, keys + 7);

    for (size_t count : {size_t(1), size_t(7), size_t(8), size_t(11), size_t(12),
                         size_t(16), size_t(100), size_t(1000), size_t(65536)}) {
        std::vector<uint8_t> rgb(3 * count);
        for (size_t i = 0; i < count; ++i) {
            uint32_t key = keys[rng.bounded(7)];
            rgb[3 * i] = uint8_t(key >> 16);
            rgb[3 * i + 1] = uint8_t(key >> 8);
            rgb[3 * i + 2] = uint8_t(key);
        }
        std::vector<uint8_t> o1(count), o2(count);
        CHECK(ref.classify_rgb(o1.data(), rgb.data(), count, keys, 7) == k::npos);
        CHECK(avx2->classify_rgb(o2.data(), rgb.data(), count, keys, 7) == k::npos);
        CHECK(o1 == o2);

        // corrupt one pixel; both must report the same index
        size_t bad = rng.bounded(count);
        rgb[3 * bad] ^= 0x80;
        rgb[3 * bad + 1] ^= 0x01;
        size_t r1 = ref.classify_rgb(o1.data(), rgb.data(), count, keys, 7);
        size_t r2 = avx2->classify_rgb(o2.data(), rgb.data(), count, keys, 7);
        CHECK(r1 == bad);
        CHECK(r2 == bad);
    }
}

#endif // x86_64

TEST_CASE("dispatch honors select() and reports the active isa") {
    k::Isa original = k::active_isa();
    CHECK(k::select(k::Isa::Scalar));
    CHECK(k::active_isa() == k::Isa::Scalar);
    uint8_t data[3] = {1, 2, 1};
    CHECK(k::count_eq(data, 3, 1) == 2);
    if (k::avx2_funcs()) {
        CHECK(k::select(k::Isa::Avx2));
        CHECK(k::active_isa() == k::Isa::Avx2);
        CHECK(k::count_eq(data, 3, 1) == 2);
    }
    k::select(original);
}
