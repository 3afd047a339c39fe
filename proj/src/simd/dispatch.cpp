#include "pointwave/simd/kernels.hpp"

#include <cstdlib>

namespace pointwave::simd {

#if defined(__x86_64__) || defined(_M_X64)
const KernelTable* avx2_kernels_if_supported();
#endif
#if defined(__aarch64__)
const KernelTable* neon_kernels_if_supported();
#endif

namespace {

const KernelTable* vector_kernels() {
#if defined(__x86_64__) || defined(_M_X64)
    return avx2_kernels_if_supported();
#elif defined(__aarch64__)
    return neon_kernels_if_supported();
#else
    return nullptr;
#endif
}

const KernelTable& resolve() {
    if (const char* env = std::getenv("POINTWAVE_SIMD")) {
        const std::string_view want(env);
        if (want == "scalar") return scalar_kernels();
        if (want != "auto" && !want.empty()) {
            if (const KernelTable* t = kernels_by_name(want)) return *t;
            return scalar_kernels();
        }
    }
    if (const KernelTable* t = vector_kernels()) return *t;
    return scalar_kernels();
}

} // namespace

const KernelTable& active_kernels() {
    static const KernelTable& table = resolve();
    return table;
}

const KernelTable* kernels_by_name(std::string_view name) {
    if (name == "scalar") return &scalar_kernels();
#if defined(__x86_64__) || defined(_M_X64)
    if (name == "avx2") return avx2_kernels_if_supported();
#endif
#if defined(__aarch64__)
    if (name == "neon") return neon_kernels_if_supported();
#endif
    return nullptr;
}

} // namespace pointwave::simd
