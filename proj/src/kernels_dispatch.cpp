#include "lobsim/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace lobsim::kernels {

bool avx2_available() {
#if defined(LOBSIM_BUILD_AVX2) && defined(__x86_64__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

struct Selected {
    Funcs funcs;
    const char* name;
    Selected() {
        const char* env = std::getenv("LOBSIM_SIMD");
        const bool force_scalar = env && std::strcmp(env, "scalar") == 0;
        if (!force_scalar && avx2_available()) {
            funcs = Funcs{&avx2::cancel_probs, &avx2::seg_sums};
            name = "avx2";
        } else {
            funcs = Funcs{&scalar::cancel_probs, &scalar::seg_sums};
            name = "scalar";
        }
    }
};

const Selected& selected() {
    static const Selected s;
    return s;
}

} // namespace

const Funcs& active() { return selected().funcs; }
const char* active_name() { return selected().name; }

} // namespace lobsim::kernels
