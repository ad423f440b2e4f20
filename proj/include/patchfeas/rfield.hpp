#pragma once

#include <numeric>
#include <vector>

#include "patchfeas/archspec.hpp"

namespace patchfeas {

// Exact rational, for jump/offset bookkeeping through transposed
// convolutions (jumps become fractional, rounding would drift).
struct Frac {
    long long num = 0;
    long long den = 1;

    static Frac of(long long n, long long d = 1) {
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g == 0) g = 1;
        return Frac{n / g, d / g};
    }
    Frac operator*(long long k) const { return of(num * k, den); }
    Frac operator*(const Frac& o) const { return of(num * o.num, den * o.den); }
    Frac operator/(long long k) const { return of(num, den * k); }
    Frac operator+(const Frac& o) const { return of(num * o.den + o.num * den, den * o.den); }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Frac& o) const { return num == o.num && den == o.den; }
};

struct RFLayer {
    Frac rf_h;
    Frac rf_w;
    Frac jump;     // input pixels per output step
    Frac offset_h; // center of output pixel 0 in input coordinates
    Frac offset_w;
};

struct RFDescriptor {
    std::vector<RFLayer> layers;
};

// Receptive field recurrence: r_l = r_{l-1} + (k_l - 1) * j, with
// j multiplying by stride through forward convolutions and dividing through
// transposed ones.
RFDescriptor receptive_field(const NetworkSpec& net);

struct PixelBox {
    int top = 0;
    int left = 0;
    int height = 0;
    int width = 0;

    bool empty() const { return height <= 0 || width <= 0; }
    bool contains(int y, int x) const {
        return y >= top && y < top + height && x >= left && x < left + width;
    }
    bool operator==(const PixelBox&) const = default;
};

// The exact axis-aligned box of final-output pixels whose value can depend on
// any pixel of `patch`. Uses the same padding geometry as the engine, so the
// gradient of any output pixel outside the box with respect to patch pixels
// is identically zero. Requires propagated shapes; throws SpecError if the
// patch leaves the input bounds.
PixelBox influence_region(const NetworkSpec& net, PixelBox patch);

}  // namespace patchfeas
