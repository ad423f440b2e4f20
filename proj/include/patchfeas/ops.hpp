#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>

#include "patchfeas/archspec.hpp"
#include "patchfeas/errors.hpp"
#include "patchfeas/tensor.hpp"

namespace patchfeas {

template <typename T>
using ColMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using RowMatMap = Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
template <typename T>
using ConstRowMatMap =
    Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

// Gather relation shared by all convolution variants:
//   src_index = dst_index * stride - pad + tap.
// im2col gathers src values onto a (c*kh*kw) x (dst_h*dst_w) matrix,
// col2im is its adjoint scatter back onto src.
template <typename T>
void im2col(const T* src, int c, int src_h, int src_w, int kh, int kw, int stride,
            int pad_h, int pad_w, int dst_h, int dst_w, ColMatrix<T>& col) {
    col.setZero(static_cast<long>(c) * kh * kw, static_cast<long>(dst_h) * dst_w);
    for (int ci = 0; ci < c; ++ci) {
        const T* plane = src + static_cast<size_t>(ci) * src_h * src_w;
        for (int u = 0; u < kh; ++u) {
            for (int v = 0; v < kw; ++v) {
                long row = (static_cast<long>(ci) * kh + u) * kw + v;
                for (int dy = 0; dy < dst_h; ++dy) {
                    int sy = dy * stride - pad_h + u;
                    if (sy < 0 || sy >= src_h) continue;
                    const T* srow = plane + static_cast<size_t>(sy) * src_w;
                    long base = static_cast<long>(dy) * dst_w;
                    for (int dx = 0; dx < dst_w; ++dx) {
                        int sx = dx * stride - pad_w + v;
                        if (sx < 0 || sx >= src_w) continue;
                        col(row, base + dx) = srow[sx];
                    }
                }
            }
        }
    }
}

template <typename T>
void col2im(const ColMatrix<T>& col, int c, int src_h, int src_w, int kh, int kw,
            int stride, int pad_h, int pad_w, int dst_h, int dst_w, T* src_out) {
    for (int ci = 0; ci < c; ++ci) {
        T* plane = src_out + static_cast<size_t>(ci) * src_h * src_w;
        for (int u = 0; u < kh; ++u) {
            for (int v = 0; v < kw; ++v) {
                long row = (static_cast<long>(ci) * kh + u) * kw + v;
                for (int dy = 0; dy < dst_h; ++dy) {
                    int sy = dy * stride - pad_h + u;
                    if (sy < 0 || sy >= src_h) continue;
                    T* srow = plane + static_cast<size_t>(sy) * src_w;
                    long base = static_cast<long>(dy) * dst_w;
                    for (int dx = 0; dx < dst_w; ++dx) {
                        int sx = dx * stride - pad_w + v;
                        if (sx < 0 || sx >= src_w) continue;
                        srow[sx] += col(row, base + dx);
                    }
                }
            }
        }
    }
}

// Forward convolution, same padding. weights: (cout) x (cin*kh*kw) row-major,
// bias: cout.
template <typename T>
Tensor<T> conv2d_fwd(const Tensor<T>& x, const std::vector<T>& weights,
                     const std::vector<T>& bias, int cout, int kh, int kw, int stride) {
    if (x.c * kh * kw * cout != static_cast<long long>(weights.size()))
        throw DataError("conv2d_fwd: weight shape mismatch");
    ConvGeom gh = conv_geom(x.h, kh, stride);
    ConvGeom gw = conv_geom(x.w, kw, stride);
    Tensor<T> y(x.n, cout, gh.out, gw.out);
    ConstRowMatMap<T> wmat(weights.data(), cout, static_cast<long>(x.c) * kh * kw);
    Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>> bvec(bias.data(), cout);
    ColMatrix<T> col;
    for (int s = 0; s < x.n; ++s) {
        im2col(x.data.data() + x.idx(s, 0, 0, 0), x.c, x.h, x.w, kh, kw, stride,
               gh.pad_lo, gw.pad_lo, y.h, y.w, col);
        y.sample(s).noalias() = wmat * col;
        y.sample(s).colwise() += bvec;
    }
    return y;
}

// Backward convolution: fills dx (returned), accumulates into dw/db when
// given.
template <typename T>
Tensor<T> conv2d_bwd(const Tensor<T>& x, const Tensor<T>& dy, const std::vector<T>& weights,
                     int cout, int kh, int kw, int stride, std::vector<T>* dw,
                     std::vector<T>* db, bool need_dx = true) {
    ConvGeom gh = conv_geom(x.h, kh, stride);
    ConvGeom gw = conv_geom(x.w, kw, stride);
    Tensor<T> dx(x.n, x.c, x.h, x.w);
    ConstRowMatMap<T> wmat(weights.data(), cout, static_cast<long>(x.c) * kh * kw);
    ColMatrix<T> col, dcol;
    for (int s = 0; s < x.n; ++s) {
        ConstRowMatMap<T> dymat(dy.data.data() + dy.idx(s, 0, 0, 0), cout,
                                static_cast<long>(dy.h) * dy.w);
        if (dw) {
            im2col(x.data.data() + x.idx(s, 0, 0, 0), x.c, x.h, x.w, kh, kw, stride,
                   gh.pad_lo, gw.pad_lo, dy.h, dy.w, col);
            RowMatMap<T> dwmat(dw->data(), cout, static_cast<long>(x.c) * kh * kw);
            dwmat.noalias() += dymat * col.transpose();
        }
        if (db) {
            // fixed-order accumulation: Eigen's vectorized redux peels
            // depending on pointer alignment, which varies between heap
            // allocations and would break bit-level reproducibility
            const T* dyp = dy.data.data() + dy.idx(s, 0, 0, 0);
            long plane = static_cast<long>(dy.h) * dy.w;
            for (int co = 0; co < cout; ++co) {
                T acc = T(0);
                for (long i = 0; i < plane; ++i) acc += dyp[co * plane + i];
                (*db)[co] += acc;
            }
        }
        if (need_dx) {
            dcol.noalias() = wmat.transpose() * dymat;
            col2im(dcol, x.c, x.h, x.w, kh, kw, stride, gh.pad_lo, gw.pad_lo, dy.h, dy.w,
                   dx.data.data() + dx.idx(s, 0, 0, 0));
        }
    }
    return dx;
}

// Transposed convolution, output spatial = input * stride. weights:
// (cin) x (cout*kh*kw) row-major, bias: cout.
template <typename T>
Tensor<T> conv_transpose_fwd(const Tensor<T>& x, const std::vector<T>& weights,
                             const std::vector<T>& bias, int cout, int kh, int kw,
                             int stride) {
    if (static_cast<long long>(x.c) * cout * kh * kw != static_cast<long long>(weights.size()))
        throw DataError("conv_transpose_fwd: weight shape mismatch");
    TConvGeom gh = tconv_geom(x.h, kh, stride);
    TConvGeom gw = tconv_geom(x.w, kw, stride);
    Tensor<T> y(x.n, cout, gh.out, gw.out);
    ConstRowMatMap<T> wmat(weights.data(), x.c, static_cast<long>(cout) * kh * kw);
    ColMatrix<T> cols;
    for (int s = 0; s < x.n; ++s) {
        cols.noalias() = wmat.transpose() * x.sample(s);
        col2im(cols, cout, y.h, y.w, kh, kw, stride, gh.pad, gw.pad, x.h, x.w,
               y.data.data() + y.idx(s, 0, 0, 0));
        for (int co = 0; co < cout; ++co) {
            T* plane = y.data.data() + y.idx(s, co, 0, 0);
            for (long i = 0; i < static_cast<long>(y.h) * y.w; ++i) plane[i] += bias[co];
        }
    }
    return y;
}

template <typename T>
Tensor<T> conv_transpose_bwd(const Tensor<T>& x, const Tensor<T>& dy,
                             const std::vector<T>& weights, int cout, int kh, int kw,
                             int stride, std::vector<T>* dw, std::vector<T>* db,
                             bool need_dx = true) {
    TConvGeom gh = tconv_geom(x.h, kh, stride);
    TConvGeom gw = tconv_geom(x.w, kw, stride);
    Tensor<T> dx(x.n, x.c, x.h, x.w);
    ConstRowMatMap<T> wmat(weights.data(), x.c, static_cast<long>(cout) * kh * kw);
    ColMatrix<T> dycol;
    for (int s = 0; s < x.n; ++s) {
        im2col(dy.data.data() + dy.idx(s, 0, 0, 0), cout, dy.h, dy.w, kh, kw, stride,
               gh.pad, gw.pad, x.h, x.w, dycol);
        if (dw) {
            RowMatMap<T> dwmat(dw->data(), x.c, static_cast<long>(cout) * kh * kw);
            dwmat.noalias() += x.sample(s) * dycol.transpose();
        }
        if (db) {
            // fixed-order accumulation for reproducibility (see conv2d_bwd)
            const T* dyp = dy.data.data() + dy.idx(s, 0, 0, 0);
            long plane = static_cast<long>(dy.h) * dy.w;
            for (int co = 0; co < cout; ++co) {
                T acc = T(0);
                for (long i = 0; i < plane; ++i) acc += dyp[co * plane + i];
                (*db)[co] += acc;
            }
        }
        if (need_dx) dx.sample(s).noalias() = wmat * dycol;
    }
    return dx;
}

template <typename T>
Tensor<T> relu_fwd(const Tensor<T>& x) {
    Tensor<T> y(x.n, x.c, x.h, x.w);
    for (size_t i = 0; i < x.data.size(); ++i) y.data[i] = x.data[i] > T(0) ? x.data[i] : T(0);
    return y;
}

template <typename T>
Tensor<T> relu_bwd(const Tensor<T>& x, const Tensor<T>& dy) {
    Tensor<T> dx(x.n, x.c, x.h, x.w);
    for (size_t i = 0; i < x.data.size(); ++i)
        dx.data[i] = x.data[i] > T(0) ? dy.data[i] : T(0);
    return dx;
}

// 3x3 stride-1 average pooling with count-normalized borders, so a constant
// input stays constant. Used to smooth adversarial patches.
template <typename T>
Tensor<T> avgpool3x3_fwd(const Tensor<T>& x) {
    Tensor<T> y(x.n, x.c, x.h, x.w);
    for (int s = 0; s < x.n; ++s)
        for (int ci = 0; ci < x.c; ++ci)
            for (int iy = 0; iy < x.h; ++iy)
                for (int ix = 0; ix < x.w; ++ix) {
                    T acc = T(0);
                    int cnt = 0;
                    for (int u = -1; u <= 1; ++u)
                        for (int v = -1; v <= 1; ++v) {
                            int yy = iy + u, xx = ix + v;
                            if (yy < 0 || yy >= x.h || xx < 0 || xx >= x.w) continue;
                            acc += x.at(s, ci, yy, xx);
                            ++cnt;
                        }
                    y.at(s, ci, iy, ix) = acc / static_cast<T>(cnt);
                }
    return y;
}

template <typename T>
Tensor<T> avgpool3x3_bwd(const Tensor<T>& x, const Tensor<T>& dy) {
    Tensor<T> dx(x.n, x.c, x.h, x.w);
    for (int s = 0; s < x.n; ++s)
        for (int ci = 0; ci < x.c; ++ci)
            for (int iy = 0; iy < x.h; ++iy)
                for (int ix = 0; ix < x.w; ++ix) {
                    int cnt = 0;
                    for (int u = -1; u <= 1; ++u)
                        for (int v = -1; v <= 1; ++v) {
                            int yy = iy + u, xx = ix + v;
                            if (yy >= 0 && yy < x.h && xx >= 0 && xx < x.w) ++cnt;
                        }
                    T g = dy.at(s, ci, iy, ix) / static_cast<T>(cnt);
                    for (int u = -1; u <= 1; ++u)
                        for (int v = -1; v <= 1; ++v) {
                            int yy = iy + u, xx = ix + v;
                            if (yy < 0 || yy >= x.h || xx < 0 || xx >= x.w) continue;
                            dx.at(s, ci, yy, xx) += g;
                        }
                }
    return dx;
}

// Per-pixel softmax over channels followed by weighted cross entropy against
// integer class targets; mean over the weight mass. Also fills the gradient
// with respect to the logits.
template <typename T>
struct LossResult {
    T loss;
    Tensor<T> dlogits;
};

template <typename T>
LossResult<T> softmax_ce_loss(const Tensor<T>& logits, const std::vector<uint8_t>& target,
                              const std::vector<T>& weights) {
    if (logits.n != 1) throw DataError("softmax_ce_loss: single sample expected");
    const int d = logits.c;
    const long px = static_cast<long>(logits.h) * logits.w;
    if (static_cast<long>(target.size()) != px || static_cast<long>(weights.size()) != px)
        throw DataError("softmax_ce_loss: target/weight size mismatch");

    LossResult<T> out{T(0), Tensor<T>(1, d, logits.h, logits.w)};
    T wsum = T(0);
    for (long p = 0; p < px; ++p) wsum += weights[p];
    if (wsum <= T(0)) throw DataError("softmax_ce_loss: no weight mass");

    for (long p = 0; p < px; ++p) {
        if (target[p] >= d) throw DataError("softmax_ce_loss: target class out of range");
        T mx = logits.data[p];
        for (int k = 1; k < d; ++k) mx = std::max(mx, logits.data[k * px + p]);
        T denom = T(0);
        for (int k = 0; k < d; ++k) denom += std::exp(logits.data[k * px + p] - mx);
        T log_denom = std::log(denom);
        T w = weights[p] / wsum;
        out.loss += w * (log_denom - (logits.data[target[p] * px + p] - mx));
        for (int k = 0; k < d; ++k) {
            T soft = std::exp(logits.data[k * px + p] - mx) / denom;
            out.dlogits.data[k * px + p] = w * (soft - (k == target[p] ? T(1) : T(0)));
        }
    }
    return out;
}

// Per-pixel channel softmax (probability maps).
template <typename T>
Tensor<T> softmax_channels(const Tensor<T>& logits) {
    Tensor<T> y(logits.n, logits.c, logits.h, logits.w);
    const long px = static_cast<long>(logits.h) * logits.w;
    for (int s = 0; s < logits.n; ++s) {
        const T* in = logits.data.data() + logits.idx(s, 0, 0, 0);
        T* o = y.data.data() + y.idx(s, 0, 0, 0);
        for (long p = 0; p < px; ++p) {
            T mx = in[p];
            for (int k = 1; k < logits.c; ++k) mx = std::max(mx, in[k * px + p]);
            T denom = T(0);
            for (int k = 0; k < logits.c; ++k) denom += std::exp(in[k * px + p] - mx);
            for (int k = 0; k < logits.c; ++k) o[k * px + p] = std::exp(in[k * px + p] - mx) / denom;
        }
    }
    return y;
}

// Winning class per pixel.
template <typename T>
std::vector<uint8_t> argmax_map(const Tensor<T>& logits) {
    const long px = static_cast<long>(logits.h) * logits.w;
    std::vector<uint8_t> m(px, 0);
    for (long p = 0; p < px; ++p) {
        int best = 0;
        T bv = logits.data[p];
        for (int k = 1; k < logits.c; ++k)
            if (logits.data[k * px + p] > bv) { bv = logits.data[k * px + p]; best = k; }
        m[p] = static_cast<uint8_t>(best);
    }
    return m;
}

}  // namespace patchfeas
