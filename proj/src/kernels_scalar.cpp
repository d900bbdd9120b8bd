#include "mapp/kernels.hpp"

namespace mapp::kernels {

uint64_t flood_step_scalar(const uint64_t* frontier, const uint64_t* allow, uint64_t* visited,
                           uint64_t* out, int words_per_row, int stride, int r0, int r1,
                           int height) {
    uint64_t any = 0;
    for (int r = r0; r < r1; ++r) {
        const uint64_t* f = frontier + static_cast<size_t>(r) * stride;
        const uint64_t* up = r > 0 ? f - stride : nullptr;
        const uint64_t* dn = r + 1 < height ? f + stride : nullptr;
        const uint64_t* al = allow + static_cast<size_t>(r) * stride;
        uint64_t* vi = visited + static_cast<size_t>(r) * stride;
        uint64_t* ou = out + static_cast<size_t>(r) * stride;
        for (int w = 0; w < words_per_row; ++w) {
            uint64_t c = f[w];
            // guard words make f[w-1] / f[w+1] safe at row ends
            uint64_t horiz = (c << 1) | (f[w - 1] >> 63) | (c >> 1) | (f[w + 1] << 63);
            uint64_t vert = (up ? up[w] : 0) | (dn ? dn[w] : 0);
            uint64_t nf = (horiz | vert) & al[w] & ~vi[w];
            ou[w] = nf;
            vi[w] |= nf;
            any |= nf;
        }
    }
    return any;
}

}  // namespace mapp::kernels
