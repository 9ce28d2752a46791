#include "laryngen/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace laryngen::kernels {

namespace {

std::atomic<const Funcs*> g_active{nullptr};
std::atomic<Isa> g_isa{Isa::Scalar};

const Funcs* detect(Isa& out_isa) {
    const char* env = std::getenv("LARYNGEN_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) {
        out_isa = Isa::Scalar;
        return &scalar_funcs();
    }
    if (const Funcs* f = avx2_funcs(); f && (!env || std::strcmp(env, "avx2") == 0)) {
        out_isa = Isa::Avx2;
        return f;
    }
    out_isa = Isa::Scalar;
    return &scalar_funcs();
}

} // namespace

const char* isa_name(Isa isa) {
    switch (isa) {
        case Isa::Avx2: return "avx2";
        case Isa::Scalar: break;
    }
    return "scalar";
}

const Funcs& active() {
    const Funcs* f = g_active.load(std::memory_order_acquire);
    if (!f) {
        Isa isa;
        f = detect(isa);
        g_isa.store(isa, std::memory_order_relaxed);
        g_active.store(f, std::memory_order_release);
    }
    return *f;
}

Isa active_isa() {
    active();
    return g_isa.load(std::memory_order_relaxed);
}

bool select(Isa isa) {
    const Funcs* f = nullptr;
    switch (isa) {
        case Isa::Scalar: f = &scalar_funcs(); break;
        case Isa::Avx2: f = avx2_funcs(); break;
    }
    if (!f)
        return false;
    g_isa.store(isa, std::memory_order_relaxed);
    g_active.store(f, std::memory_order_release);
    return true;
}

} // namespace laryngen::kernels
