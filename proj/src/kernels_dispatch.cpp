#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapp/kernels.hpp"

namespace mapp::kernels {

namespace {

const Backend kScalar{"scalar", &flood_step_scalar};
#if defined(__x86_64__) || defined(_M_X64)
const Backend kAvx2{"avx2", &flood_step_avx2};
#endif

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

const Backend& pick_backend() {
    const char* req = std::getenv("MAPP_KERNEL");
    if (req != nullptr && *req != '\0') {
        if (std::strcmp(req, "scalar") == 0) {
            return kScalar;
        }
#if defined(__x86_64__) || defined(_M_X64)
        if (std::strcmp(req, "avx2") == 0) {
            if (!cpu_has_avx2()) {
                throw std::runtime_error("MAPP_KERNEL=avx2 requested but CPU lacks AVX2");
            }
            return kAvx2;
        }
#endif
        throw std::runtime_error("unknown MAPP_KERNEL value: " + std::string(req));
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (cpu_has_avx2()) {
        return kAvx2;
    }
#endif
    return kScalar;
}

}  // namespace

const Backend& active_backend() {
    static const Backend& chosen = pick_backend();
    return chosen;
}

std::vector<const Backend*> available_backends() {
    std::vector<const Backend*> out{&kScalar};
#if defined(__x86_64__) || defined(_M_X64)
    if (cpu_has_avx2()) {
        out.push_back(&kAvx2);
    }
#endif
    return out;
}

}  // namespace mapp::kernels
