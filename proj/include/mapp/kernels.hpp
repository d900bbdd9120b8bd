#pragma once

#include <cstdint>
#include <vector>

namespace mapp::kernels {

// One BFS wavefront step over bit-packed rows (4-connectivity):
//
//   out[r] = (frontier[r] << 1 | frontier[r] >> 1 | frontier[r-1] | frontier[r+1])
//            & allow[r] & ~visited[r]
//   visited[r] |= out[r]
//
// for r in [r0, r1). Pointers are row-0 base pointers of buffers laid out
// with `stride` words per row; the word before and after each row's
// `words_per_row` payload must be zero (BitRows guarantees this). Horizontal
// shifts carry across word boundaries. Returns the OR of all words written
// to out (0 means the frontier died inside the band).
using FloodStepFn = uint64_t (*)(const uint64_t* frontier, const uint64_t* allow,
                                 uint64_t* visited, uint64_t* out, int words_per_row, int stride,
                                 int r0, int r1, int height);

struct Backend {
    const char* name;
    FloodStepFn flood_step;
};

uint64_t flood_step_scalar(const uint64_t* frontier, const uint64_t* allow, uint64_t* visited,
                           uint64_t* out, int words_per_row, int stride, int r0, int r1,
                           int height);

#if defined(__x86_64__) || defined(_M_X64)
uint64_t flood_step_avx2(const uint64_t* frontier, const uint64_t* allow, uint64_t* visited,
                         uint64_t* out, int words_per_row, int stride, int r0, int r1, int height);
#endif

// Backend picked at first use: AVX2 when the CPU supports it, otherwise the
// scalar reference. MAPP_KERNEL=scalar|avx2 in the environment overrides.
const Backend& active_backend();

// Every backend usable on this machine (for equivalence tests).
std::vector<const Backend*> available_backends();

}  // namespace mapp::kernels
