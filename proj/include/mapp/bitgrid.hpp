#pragma once

#include <cstdint>
#include <vector>

#include "mapp/grid.hpp"

namespace mapp {

// Bit-packed per-row cell masks laid out for the flood kernels. Bit b of
// payload word w in a row addresses column w * 64 + b. Each row owns
// `words_per_row` payload words followed by four trailing guard words, and
// one extra guard word sits before row 0, so a kernel may read one word
// before a row's payload and read/write up to four words after it without
// bounds checks. All guard words hold zero and stay zero: set() refuses
// out-of-range coordinates and the kernels mask their stores with an allow
// mask whose guards are zero.
class BitRows {
public:
    BitRows(int width, int height);

    int width() const { return width_; }
    int height() const { return height_; }
    int words_per_row() const { return words_per_row_; }
    int stride() const { return stride_; }

    uint64_t* row(int r) { return data_.data() + 1 + static_cast<size_t>(r) * stride_; }
    const uint64_t* row(int r) const {
        return data_.data() + 1 + static_cast<size_t>(r) * stride_;
    }

    bool test(Coord c) const {
        return (row(c.row)[c.col >> 6] >> (c.col & 63)) & 1u;
    }
    void set(Coord c) { row(c.row)[c.col >> 6] |= uint64_t{1} << (c.col & 63); }
    void clear(Coord c) { row(c.row)[c.col >> 6] &= ~(uint64_t{1} << (c.col & 63)); }

    // Zeroes rows [r0, r1); payload and guards alike.
    void reset_rows(int r0, int r1);
    void reset();

    // Population count over all payload words.
    int count() const;
    bool any() const;

    // Calls fn(Coord) for every set bit, row-major order.
    template <typename Fn>
    void for_each_set(Fn&& fn) const {
        for (int r = 0; r < height_; ++r) {
            const uint64_t* words = row(r);
            for (int w = 0; w < words_per_row_; ++w) {
                uint64_t bits = words[w];
                while (bits != 0) {
                    int b = __builtin_ctzll(bits);
                    bits &= bits - 1;
                    fn(Coord{r, w * 64 + b});
                }
            }
        }
    }

    friend bool operator==(const BitRows&, const BitRows&) = default;

private:
    int width_;
    int height_;
    int words_per_row_;
    int stride_;
    std::vector<uint64_t> data_;
};

// Mask with a set bit on every traversable cell of the grid.
BitRows traversable_mask(const Grid& grid);

// BFS over an allow mask driven by the active flood kernel. The expansion
// sweeps only the row band that can still hold frontier bits, so small
// fills on big masks stay cheap. A FloodFill object is a reusable
// workspace: run() clears whatever the previous run touched.
class FloodFill {
public:
    FloodFill(int width, int height);

    // Expands from `from` through cells set in `allow` (which must include
    // `from` and have the same shape as this workspace). Stops as soon as
    // `target` is visited when one is given. Returns true iff a target was
    // given and reached.
    bool run(const BitRows& allow, Coord from, const Coord* target = nullptr);

    const BitRows& visited() const { return visited_; }

private:
    BitRows visited_;
    BitRows frontier_;
    BitRows next_;
    int touched_lo_ = 0;
    int touched_hi_ = 0;
};

// Connected components of the traversable cells under 4-connectivity.
struct Components {
    std::vector<int32_t> label;  // per grid cell; -1 on blocked cells
    std::vector<int> sizes;      // indexed by label

    // Label of the biggest component (smallest label wins ties); -1 if the
    // grid has no traversable cell.
    int largest() const;
};

Components connected_components(const Grid& grid);

}  // namespace mapp
