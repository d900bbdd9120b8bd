#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "mapp/kernels.hpp"

namespace mapp::kernels {

// Same contract as flood_step_scalar, four words per iteration. Unaligned
// loads at w-1 / w+1 read into the zeroed guard words; stores past
// words_per_row land in guard slots where allow is zero, so they write
// zeros and keep the guards intact.
uint64_t flood_step_avx2(const uint64_t* frontier, const uint64_t* allow, uint64_t* visited,
                         uint64_t* out, int words_per_row, int stride, int r0, int r1,
                         int height) {
    __m256i any = _mm256_setzero_si256();
    const __m256i zero = _mm256_setzero_si256();
    for (int r = r0; r < r1; ++r) {
        const uint64_t* f = frontier + static_cast<size_t>(r) * stride;
        const uint64_t* up = r > 0 ? f - stride : nullptr;
        const uint64_t* dn = r + 1 < height ? f + stride : nullptr;
        const uint64_t* al = allow + static_cast<size_t>(r) * stride;
        uint64_t* vi = visited + static_cast<size_t>(r) * stride;
        uint64_t* ou = out + static_cast<size_t>(r) * stride;
        for (int w = 0; w < words_per_row; w += 4) {
            __m256i c = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(f + w));
            __m256i cl = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(f + w - 1));
            __m256i cr = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(f + w + 1));
            __m256i horiz = _mm256_or_si256(
                _mm256_or_si256(_mm256_slli_epi64(c, 1), _mm256_srli_epi64(cl, 63)),
                _mm256_or_si256(_mm256_srli_epi64(c, 1), _mm256_slli_epi64(cr, 63)));
            __m256i vert =
                _mm256_or_si256(up ? _mm256_loadu_si256(reinterpret_cast<const __m256i*>(up + w)) : zero,
                                dn ? _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dn + w)) : zero);
            __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(al + w));
            __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(vi + w));
            __m256i nf = _mm256_andnot_si256(v, _mm256_and_si256(_mm256_or_si256(horiz, vert), a));
            _mm256_storeu_si256(reinterpret_cast<__m256i*>(ou + w), nf);
            _mm256_storeu_si256(reinterpret_cast<__m256i*>(vi + w), _mm256_or_si256(v, nf));
            any = _mm256_or_si256(any, nf);
        }
    }
    // OR-reduce so the return value matches the scalar kernel bit for bit.
    __m128i lo = _mm256_castsi256_si128(any);
    __m128i hi = _mm256_extracti128_si256(any, 1);
    __m128i both = _mm_or_si128(lo, hi);
    return static_cast<uint64_t>(_mm_extract_epi64(both, 0)) |
           static_cast<uint64_t>(_mm_extract_epi64(both, 1));
}

}  // namespace mapp::kernels

#endif  // x86_64
