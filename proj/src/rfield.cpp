#include "patchfeas/rfield.hpp"

namespace patchfeas {

namespace {

long long div_floor(long long a, long long b) {
    long long q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}
long long div_ceil(long long a, long long b) { return -div_floor(-a, b); }

struct Interval {
    long long lo, hi;  // inclusive; lo > hi means empty
    bool empty() const { return lo > hi; }
};

Interval conv_affected(Interval in, int in_size, int k, int s) {
    ConvGeom g = conv_geom(in_size, k, s);
    long long lo = div_ceil(in.lo + g.pad_lo - k + 1, s);
    long long hi = div_floor(in.hi + g.pad_lo, s);
    return {std::max(lo, 0LL), std::min<long long>(hi, g.out - 1)};
}

Interval tconv_affected(Interval in, int in_size, int k, int s) {
    TConvGeom g = tconv_geom(in_size, k, s);
    long long lo = in.lo * s - g.pad;
    long long hi = in.hi * s - g.pad + k - 1;
    return {std::max(lo, 0LL), std::min<long long>(hi, g.out - 1)};
}

}  // namespace

RFDescriptor receptive_field(const NetworkSpec& net) {
    if (!net.shapes_ready())
        throw SpecError("receptive_field: shapes not propagated");

    RFDescriptor d;
    Frac rf_h = Frac::of(1), rf_w = Frac::of(1);
    Frac jump = Frac::of(1);
    Frac off_h = Frac::of(0), off_w = Frac::of(0);

    for (size_t i = 0; i < net.layers.size(); ++i) {
        const LayerSpec& l = net.layers[i];
        Shape3 before = shape_before(net, static_cast<int>(i));
        switch (l.kind) {
            case LayerKind::relu:
            case LayerKind::fully_connected:
                break;
            case LayerKind::conv:
            case LayerKind::conv_strided: {
                int s = l.kind == LayerKind::conv ? 1 : l.stride;
                rf_h = rf_h + jump * (l.kernel_h - 1);
                rf_w = rf_w + jump * (l.kernel_w - 1);
                // symmetric pads keep centers aligned; asymmetric (even
                // kernel / strided) pads shift by (k-1)/2 - pad_lo steps.
                ConvGeom gh = conv_geom(before.h, l.kernel_h, s);
                ConvGeom gw = conv_geom(before.w, l.kernel_w, s);
                off_h = off_h + (Frac::of(l.kernel_h - 1, 2) + Frac::of(-gh.pad_lo)) * jump;
                off_w = off_w + (Frac::of(l.kernel_w - 1, 2) + Frac::of(-gw.pad_lo)) * jump;
                jump = jump * s;
                break;
            }
            case LayerKind::conv_transpose: {
                jump = jump / l.stride;
                rf_h = rf_h + jump * (l.kernel_h - 1);
                rf_w = rf_w + jump * (l.kernel_w - 1);
                TConvGeom gh = tconv_geom(before.h, l.kernel_h, l.stride);
                TConvGeom gw = tconv_geom(before.w, l.kernel_w, l.stride);
                off_h = off_h + (Frac::of(gh.pad) + Frac::of(-(l.kernel_h - 1), 2)) * jump;
                off_w = off_w + (Frac::of(gw.pad) + Frac::of(-(l.kernel_w - 1), 2)) * jump;
                break;
            }
        }
        d.layers.push_back(RFLayer{rf_h, rf_w, jump, off_h, off_w});
    }
    return d;
}

PixelBox influence_region(const NetworkSpec& net, PixelBox patch) {
    if (!net.shapes_ready())
        throw SpecError("influence_region: shapes not propagated");
    if (patch.empty() || patch.top < 0 || patch.left < 0 ||
        patch.top + patch.height > net.input.h || patch.left + patch.width > net.input.w)
        throw SpecError("influence_region: patch out of input bounds");

    // Per-layer affected index intervals, so concat sources can be merged.
    std::vector<Interval> rows(net.layers.size()), cols(net.layers.size());
    Interval in_r{patch.top, patch.top + patch.height - 1};
    Interval in_c{patch.left, patch.left + patch.width - 1};

    for (size_t i = 0; i < net.layers.size(); ++i) {
        const LayerSpec& l = net.layers[i];
        Interval r = i == 0 ? in_r : rows[i - 1];
        Interval c = i == 0 ? in_c : cols[i - 1];
        if (l.concat_with >= 0) {
            r = {std::min(r.lo, rows[l.concat_with].lo), std::max(r.hi, rows[l.concat_with].hi)};
            c = {std::min(c.lo, cols[l.concat_with].lo), std::max(c.hi, cols[l.concat_with].hi)};
        }
        Shape3 before = shape_before(net, static_cast<int>(i));
        switch (l.kind) {
            case LayerKind::relu:
                break;
            case LayerKind::conv:
            case LayerKind::conv_strided:
                r = conv_affected(r, before.h, l.kernel_h, l.kind == LayerKind::conv ? 1 : l.stride);
                c = conv_affected(c, before.w, l.kernel_w, l.kind == LayerKind::conv ? 1 : l.stride);
                break;
            case LayerKind::conv_transpose:
                r = tconv_affected(r, before.h, l.kernel_h, l.stride);
                c = tconv_affected(c, before.w, l.kernel_w, l.stride);
                break;
            case LayerKind::fully_connected:
                throw SpecError("influence_region: fully connected layers have no spatial support");
        }
        rows[i] = r;
        cols[i] = c;
    }

    Interval r = net.layers.empty() ? in_r : rows.back();
    Interval c = net.layers.empty() ? in_c : cols.back();
    if (r.empty() || c.empty()) return PixelBox{0, 0, 0, 0};
    return PixelBox{static_cast<int>(r.lo), static_cast<int>(c.lo),
                    static_cast<int>(r.hi - r.lo + 1), static_cast<int>(c.hi - c.lo + 1)};
}

}  // namespace patchfeas
