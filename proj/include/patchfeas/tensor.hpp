#pragma once

#include <Eigen/Core>
#include <cassert>
#include <vector>

namespace patchfeas {

// Dense rank-4 array (batch, channel, height, width), row-major, with an
// on-demand same-shape gradient buffer. Scalar is templated: float for
// training and attacks, double for finite-difference checks.
template <typename T>
struct Tensor {
    int n = 0, c = 0, h = 0, w = 0;
    std::vector<T> data;
    std::vector<T> grad;

    Tensor() = default;
    Tensor(int n_, int c_, int h_, int w_)
        : n(n_), c(c_), h(h_), w(w_),
          data(static_cast<size_t>(n_) * c_ * h_ * w_, T(0)) {}

    size_t size() const { return data.size(); }

    // grad is allocated on first use; alloc_grad() makes shapes match.
    void alloc_grad() { grad.assign(data.size(), T(0)); }
    size_t idx(int in_, int ic, int iy, int ix) const {
        return ((static_cast<size_t>(in_) * c + ic) * h + iy) * w + ix;
    }
    T& at(int in_, int ic, int iy, int ix) { return data[idx(in_, ic, iy, ix)]; }
    T at(int in_, int ic, int iy, int ix) const { return data[idx(in_, ic, iy, ix)]; }

    void zero_grad() { alloc_grad(); }

    bool same_shape(const Tensor& o) const {
        return n == o.n && c == o.c && h == o.h && w == o.w;
    }

    // Channels-by-pixels view of one batch member (C x H*W, rows contiguous).
    using MatMap = Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
    using ConstMatMap =
        Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
    MatMap sample(int in_) { return MatMap(data.data() + idx(in_, 0, 0, 0), c, static_cast<long>(h) * w); }
    ConstMatMap sample(int in_) const {
        return ConstMatMap(data.data() + idx(in_, 0, 0, 0), c, static_cast<long>(h) * w);
    }
    MatMap sample_grad(int in_) { return MatMap(grad.data() + idx(in_, 0, 0, 0), c, static_cast<long>(h) * w); }
    ConstMatMap sample_grad(int in_) const {
        return ConstMatMap(grad.data() + idx(in_, 0, 0, 0), c, static_cast<long>(h) * w);
    }

    template <typename U>
    Tensor<U> cast() const {
        Tensor<U> t(n, c, h, w);
        for (size_t i = 0; i < data.size(); ++i) t.data[i] = static_cast<U>(data[i]);
        return t;
    }
};

}  // namespace patchfeas
