#include "mapp/bitgrid.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "mapp/kernels.hpp"

namespace mapp {

namespace {

int checked_words_per_row(int width, int height) {
    if (width <= 0 || height <= 0) {
        throw std::invalid_argument("BitRows dimensions must be positive");
    }
    return (width + 63) / 64;
}

}  // namespace

BitRows::BitRows(int width, int height)
    : width_(width),
      height_(height),
      words_per_row_(checked_words_per_row(width, height)),
      stride_(words_per_row_ + 4),
      data_(1 + static_cast<size_t>(height) * stride_, 0) {}

void BitRows::reset_rows(int r0, int r1) {
    if (r0 >= r1) {
        return;
    }
    std::fill(row(r0), row(r0) + static_cast<size_t>(r1 - r0) * stride_, uint64_t{0});
}

void BitRows::reset() {
    std::fill(data_.begin(), data_.end(), uint64_t{0});
}

int BitRows::count() const {
    int total = 0;
    for (int r = 0; r < height_; ++r) {
        const uint64_t* words = row(r);
        for (int w = 0; w < words_per_row_; ++w) {
            total += std::popcount(words[w]);
        }
    }
    return total;
}

bool BitRows::any() const {
    for (int r = 0; r < height_; ++r) {
        const uint64_t* words = row(r);
        for (int w = 0; w < words_per_row_; ++w) {
            if (words[w] != 0) {
                return true;
            }
        }
    }
    return false;
}

BitRows traversable_mask(const Grid& grid) {
    BitRows mask(grid.width(), grid.height());
    for (int r = 0; r < grid.height(); ++r) {
        for (int c = 0; c < grid.width(); ++c) {
            if (!grid.blocked(Coord{r, c})) {
                mask.set(Coord{r, c});
            }
        }
    }
    return mask;
}

FloodFill::FloodFill(int width, int height)
    : visited_(width, height), frontier_(width, height), next_(width, height) {}

bool FloodFill::run(const BitRows& allow, Coord from, const Coord* target) {
    if (allow.width() != visited_.width() || allow.height() != visited_.height()) {
        throw std::invalid_argument("FloodFill: allow mask shape mismatch");
    }
    if (!allow.test(from)) {
        throw std::invalid_argument("FloodFill: start cell not in allow mask");
    }
    visited_.reset_rows(touched_lo_, touched_hi_);
    frontier_.reset_rows(touched_lo_, touched_hi_);
    next_.reset_rows(touched_lo_, touched_hi_);

    visited_.set(from);
    frontier_.set(from);
    if (target != nullptr && from == *target) {
        touched_lo_ = from.row;
        touched_hi_ = from.row + 1;
        return true;
    }

    const auto& backend = kernels::active_backend();
    const int height = visited_.height();
    int lo = from.row;
    int hi = from.row + 1;
    touched_lo_ = lo;
    touched_hi_ = hi;
    for (;;) {
        int r0 = std::max(0, lo - 1);
        int r1 = std::min(height, hi + 1);
        uint64_t grew =
            backend.flood_step(frontier_.row(0), allow.row(0), visited_.row(0), next_.row(0),
                               visited_.words_per_row(), visited_.stride(), r0, r1, height);
        if (grew == 0) {
            return false;
        }
        std::swap(frontier_, next_);
        lo = r0;
        hi = r1;
        touched_lo_ = std::min(touched_lo_, lo);
        touched_hi_ = std::max(touched_hi_, hi);
        if (target != nullptr && visited_.test(*target)) {
            return true;
        }
    }
}

int Components::largest() const {
    int best = -1;
    for (size_t i = 0; i < sizes.size(); ++i) {
        if (best < 0 || sizes[i] > sizes[best]) {
            best = static_cast<int>(i);
        }
    }
    return best;
}

Components connected_components(const Grid& grid) {
    Components out;
    out.label.assign(grid.cell_count(), -1);

    BitRows remaining = traversable_mask(grid);
    FloodFill fill(grid.width(), grid.height());
    for (int r = 0; r < grid.height(); ++r) {
        for (int c = 0; c < grid.width(); ++c) {
            Coord seed{r, c};
            if (!remaining.test(seed)) {
                continue;
            }
            fill.run(remaining, seed);
            int label = static_cast<int>(out.sizes.size());
            int size = 0;
            fill.visited().for_each_set([&](Coord cell) {
                out.label[grid.index(cell)] = label;
                remaining.clear(cell);
                ++size;
            });
            out.sizes.push_back(size);
        }
    }
    return out;
}

}  // namespace mapp
