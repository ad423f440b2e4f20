#pragma once

#include <string>
#include <vector>

#include "patchfeas/archspec.hpp"
#include "patchfeas/ops.hpp"
#include "patchfeas/rng.hpp"
#include "patchfeas/tensor.hpp"

namespace patchfeas {

// Per-layer learnable tensors in layer order; empty vectors for layers
// without parameters (relu). Stored as float32, which is also the on-disk
// format.
struct ModelParams {
    std::vector<std::vector<float>> weights;
    std::vector<std::vector<float>> biases;

    bool operator==(const ModelParams&) const = default;
};

// Fan-in scaled uniform init, seeded.
ModelParams init_params(const NetworkSpec& net, uint64_t seed);

// Binary model file: magic "PSEG1", little-endian, u32 length-prefixed spec
// JSON, then per-layer float32 weight and bias blobs in layer order.
void save_model(const std::string& path, const NetworkSpec& net, const ModelParams& p);
std::vector<char> serialize_model(const NetworkSpec& net, const ModelParams& p);
struct LoadedModel {
    NetworkSpec spec;  // shapes propagated from the stored input shape
    ModelParams params;
};
LoadedModel load_model(const std::string& path);

// Expected weight/bias element counts for layer i.
size_t weight_count(const NetworkSpec& net, int layer_index);
size_t bias_count(const NetworkSpec& net, int layer_index);

// Forward/backward evaluator for a propagated NetworkSpec. Caches per-layer
// activations; backward returns the input gradient and accumulates parameter
// gradients into gw/gb.
template <typename T>
class Engine {
public:
    Engine(const NetworkSpec& spec, const ModelParams& params) : spec_(spec) {
        if (!spec_.shapes_ready()) throw SpecError("Engine: shapes not propagated");
        for (size_t i = 0; i < spec_.layers.size(); ++i) {
            w_.emplace_back(params.weights[i].begin(), params.weights[i].end());
            b_.emplace_back(params.biases[i].begin(), params.biases[i].end());
            gw.emplace_back(params.weights[i].size(), T(0));
            gb.emplace_back(params.biases[i].size(), T(0));
        }
    }

    const NetworkSpec& spec() const { return spec_; }
    std::vector<std::vector<T>>& weights() { return w_; }
    std::vector<std::vector<T>>& bias_vecs() { return b_; }

    void zero_grads() {
        for (auto& g : gw) std::fill(g.begin(), g.end(), T(0));
        for (auto& g : gb) std::fill(g.begin(), g.end(), T(0));
    }

    Tensor<T> forward(const Tensor<T>& x) {
        if (x.c != spec_.input.c || x.h != spec_.input.h || x.w != spec_.input.w)
            throw DataError("Engine::forward: input shape mismatch");
        input_ = x;
        acts_.clear();
        acts_.reserve(spec_.layers.size());
        const Tensor<T>* cur = &input_;
        for (size_t i = 0; i < spec_.layers.size(); ++i) {
            const LayerSpec& l = spec_.layers[i];
            Tensor<T> in;
            const Tensor<T>* src = cur;
            if (l.concat_with >= 0) {
                in = concat_channels(*cur, acts_[l.concat_with]);
                src = &in;
            }
            Tensor<T> out;
            switch (l.kind) {
                case LayerKind::relu:
                    out = relu_fwd(*src);
                    break;
                case LayerKind::conv:
                    out = conv2d_fwd(*src, w_[i], b_[i], l.out_channels, l.kernel_h,
                                     l.kernel_w, 1);
                    break;
                case LayerKind::conv_strided:
                    out = conv2d_fwd(*src, w_[i], b_[i], l.out_channels, l.kernel_h,
                                     l.kernel_w, l.stride);
                    break;
                case LayerKind::conv_transpose:
                    out = conv_transpose_fwd(*src, w_[i], b_[i], l.out_channels, l.kernel_h,
                                             l.kernel_w, l.stride);
                    break;
                case LayerKind::fully_connected:
                    throw SpecError("Engine: fully connected layers are not executable here");
            }
            acts_.push_back(std::move(out));
            cur = &acts_.back();
        }
        return acts_.empty() ? input_ : acts_.back();
    }

    // dlast: gradient with respect to the final activation. Returns the
    // gradient with respect to the network input.
    Tensor<T> backward(const Tensor<T>& dlast, bool need_param_grads = true) {
        std::vector<Tensor<T>> dacts(spec_.layers.size());
        if (spec_.layers.empty()) return dlast;
        dacts.back() = dlast;
        Tensor<T> dinput(input_.n, input_.c, input_.h, input_.w);
        bool dinput_set = false;

        for (int i = static_cast<int>(spec_.layers.size()) - 1; i >= 0; --i) {
            const LayerSpec& l = spec_.layers[i];
            const Tensor<T>& dy = dacts[i];
            Tensor<T> layer_in;
            const Tensor<T>* src = i == 0 ? &input_ : &acts_[i - 1];
            if (l.concat_with >= 0) {
                layer_in = concat_channels(*src, acts_[l.concat_with]);
                src = &layer_in;
            }
            Tensor<T> din;
            switch (l.kind) {
                case LayerKind::relu:
                    din = relu_bwd(*src, dy);
                    break;
                case LayerKind::conv:
                    din = conv2d_bwd(*src, dy, w_[i], l.out_channels, l.kernel_h, l.kernel_w,
                                     1, need_param_grads ? &gw[i] : nullptr,
                                     need_param_grads ? &gb[i] : nullptr, true);
                    break;
                case LayerKind::conv_strided:
                    din = conv2d_bwd(*src, dy, w_[i], l.out_channels, l.kernel_h, l.kernel_w,
                                     l.stride, need_param_grads ? &gw[i] : nullptr,
                                     need_param_grads ? &gb[i] : nullptr, true);
                    break;
                case LayerKind::conv_transpose:
                    din = conv_transpose_bwd(*src, dy, w_[i], l.out_channels, l.kernel_h,
                                             l.kernel_w, l.stride,
                                             need_param_grads ? &gw[i] : nullptr,
                                             need_param_grads ? &gb[i] : nullptr, true);
                    break;
                case LayerKind::fully_connected:
                    throw SpecError("Engine: fully connected layers are not executable here");
            }
            // split the gradient between the sequential input and the concat
            // source
            int main_c = din.c - (l.concat_with >= 0 ? spec_.shapes[l.concat_with].c : 0);
            Tensor<T> dmain = slice_channels(din, 0, main_c);
            if (l.concat_with >= 0) {
                Tensor<T> dskip = slice_channels(din, main_c, din.c - main_c);
                add_into(dacts[l.concat_with], dskip);
            }
            if (i == 0) {
                add_into(dinput, dmain);
                dinput_set = true;
            } else {
                add_into(dacts[i - 1], dmain);
            }
        }
        (void)dinput_set;
        return dinput;
    }

    const Tensor<T>& activation(int i) const { return acts_.at(i); }
    std::vector<std::vector<T>> gw, gb;

private:
    static Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b) {
        if (a.n != b.n || a.h != b.h || a.w != b.w)
            throw DataError("concat: spatial shape mismatch");
        Tensor<T> out(a.n, a.c + b.c, a.h, a.w);
        size_t plane = static_cast<size_t>(a.h) * a.w;
        for (int s = 0; s < a.n; ++s) {
            std::copy_n(a.data.data() + a.idx(s, 0, 0, 0), a.c * plane,
                        out.data.data() + out.idx(s, 0, 0, 0));
            std::copy_n(b.data.data() + b.idx(s, 0, 0, 0), b.c * plane,
                        out.data.data() + out.idx(s, a.c, 0, 0));
        }
        return out;
    }

    static Tensor<T> slice_channels(const Tensor<T>& t, int from, int count) {
        Tensor<T> out(t.n, count, t.h, t.w);
        size_t plane = static_cast<size_t>(t.h) * t.w;
        for (int s = 0; s < t.n; ++s)
            std::copy_n(t.data.data() + t.idx(s, from, 0, 0), count * plane,
                        out.data.data() + out.idx(s, 0, 0, 0));
        return out;
    }

    static void add_into(Tensor<T>& dst, const Tensor<T>& src) {
        if (dst.size() == 0) {
            dst = src;
            return;
        }
        for (size_t i = 0; i < dst.data.size(); ++i) dst.data[i] += src.data[i];
    }

    NetworkSpec spec_;
    std::vector<std::vector<T>> w_, b_;
    Tensor<T> input_;
    std::vector<Tensor<T>> acts_;
};

}  // namespace patchfeas
