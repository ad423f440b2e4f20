#include "patchfeas/geometry.hpp"

#include <algorithm>
#include <numeric>

namespace patchfeas {

long BinaryMask::count() const {
    return static_cast<long>(std::count_if(bits.begin(), bits.end(),
                                           [](uint8_t b) { return b != 0; }));
}

namespace {

// area desc, then top asc, left asc, height desc
bool better(const RectPlacement& a, const RectPlacement& b) {
    if (a.area() != b.area()) return a.area() > b.area();
    if (a.top != b.top) return a.top < b.top;
    if (a.left != b.left) return a.left < b.left;
    return a.height > b.height;
}

}  // namespace

std::optional<RectPlacement> largest_inscribed_rect(const BinaryMask& mask, long* op_count) {
    const int h = mask.height, w = mask.width;
    long ops = 0;
    std::optional<RectPlacement> best;

    std::vector<int> heights(static_cast<size_t>(w) + 1, 0);  // sentinel column
    std::vector<int> stack;
    stack.reserve(w + 1);

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            heights[x] = mask.at(y, x) ? heights[x] + 1 : 0;
            ++ops;
        }
        stack.clear();
        for (int x = 0; x <= w; ++x) {
            int cur = heights[x];
            int left = x;
            while (!stack.empty() && heights[stack.back()] >= cur) {
                int bar = stack.back();
                stack.pop_back();
                ++ops;
                int bar_h = heights[bar];
                if (bar_h == 0) { left = bar; continue; }
                int bar_left = stack.empty() ? 0 : stack.back() + 1;
                RectPlacement r{y - bar_h + 1, bar_left, bar_h, x - bar_left};
                if (!best || better(r, *best)) best = r;
                left = bar;
            }
            (void)left;
            stack.push_back(x);
            ++ops;
        }
    }
    if (op_count) *op_count = ops;
    return best;
}

PatchOrigin center_patch(const RectPlacement& rect, int patch_h, int patch_w) {
    if (patch_h < 1 || patch_w < 1) throw DataError("center_patch: patch dims must be >= 1");
    if (patch_h > rect.height || patch_w > rect.width)
        throw DataError("center_patch: patch larger than rectangle");
    return PatchOrigin{rect.top + (rect.height - patch_h) / 2,
                       rect.left + (rect.width - patch_w) / 2};
}

}  // namespace patchfeas
