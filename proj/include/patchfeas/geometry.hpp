#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "patchfeas/errors.hpp"

namespace patchfeas {

struct BinaryMask {
    int height = 0;
    int width = 0;
    std::vector<uint8_t> bits;  // row-major, nonzero == true

    BinaryMask() = default;
    BinaryMask(int h, int w) : height(h), width(w), bits(static_cast<size_t>(h) * w, 0) {}

    bool at(int y, int x) const { return bits[static_cast<size_t>(y) * width + x] != 0; }
    void set(int y, int x, bool v) { bits[static_cast<size_t>(y) * width + x] = v ? 1 : 0; }
    long count() const;
};

struct RectPlacement {
    int top = 0;
    int left = 0;
    int height = 0;
    int width = 0;

    long area() const { return static_cast<long>(height) * width; }
    bool operator==(const RectPlacement&) const = default;
};

// Maximum-area all-true axis-aligned rectangle, histogram-of-heights with a
// monotonic stack, O(H*W). Ties broken by smallest top, then smallest left,
// then largest height. Returns nullopt for an all-false mask.
// `op_count`, when given, receives the number of inner-loop steps (used to
// check the linear complexity claim).
std::optional<RectPlacement> largest_inscribed_rect(const BinaryMask& mask,
                                                    long* op_count = nullptr);

// Centered placement of a patch inside a rectangle; equal margins, the odd
// spare pixel goes to the bottom/right. Throws DataError if the patch does
// not fit.
struct PatchOrigin {
    int top = 0;
    int left = 0;
};
PatchOrigin center_patch(const RectPlacement& rect, int patch_h, int patch_w);

}  // namespace patchfeas
