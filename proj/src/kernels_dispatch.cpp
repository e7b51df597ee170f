#include "sobex/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace sobex::kernels {

const Ops* avx2_ops_or_null(); // kernels_avx2.cpp (null when not compiled in)

bool avx2_available() {
    if (avx2_ops_or_null() == nullptr)
        return false;
#if defined(__x86_64__) || defined(_M_X64)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const Ops& active_ops() {
    static const Ops* selected = [] {
        const char* env = std::getenv("SOBEX_KERNEL");
        if (env != nullptr && std::strcmp(env, "scalar") == 0)
            return &scalar_ops();
        if (avx2_available())
            return avx2_ops_or_null();
        return &scalar_ops();
    }();
    return *selected;
}

} // namespace sobex::kernels
