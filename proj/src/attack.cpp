#include "patchfeas/attack.hpp"

#include <algorithm>
#include <cmath>

#include "patchfeas/dataset.hpp"

namespace patchfeas {

PatchSpec PatchSpec::gray(int h, int w, int top, int left) {
    PatchSpec p;
    p.height = h;
    p.width = w;
    p.top = top;
    p.left = left;
    p.pixels.assign(static_cast<size_t>(3) * h * w, 0.5f);
    return p;
}

AttackTarget build_target_class_switch(const std::vector<uint8_t>& labels, int h, int w,
                                       uint8_t from, uint8_t to) {
    if (labels.size() != static_cast<size_t>(h) * w)
        throw DataError("build_target: label size mismatch");
    if (std::find(labels.begin(), labels.end(), from) == labels.end())
        throw DataError("build_target: class " + std::to_string(from) +
                        " not present in the labels");
    AttackTarget t{h, w, labels, std::vector<float>(labels.size(), 1.0f)};
    for (uint8_t& c : t.classes)
        if (c == from) c = to;
    return t;
}

AttackTarget build_target_erase(const std::vector<uint8_t>& labels, int h, int w,
                                uint8_t object_class) {
    return build_target_class_switch(labels, h, w, object_class, kClassBackground);
}

AttackTarget build_target_custom(const std::vector<uint8_t>& mask, int h, int w,
                                 int num_classes) {
    if (mask.size() != static_cast<size_t>(h) * w)
        throw DataError("build_target: custom mask shape mismatch");
    for (uint8_t c : mask)
        if (c >= num_classes) throw DataError("build_target: class index out of range");
    return AttackTarget{h, w, mask, std::vector<float>(mask.size(), 1.0f)};
}

namespace {

Tensor<float> patch_tensor(const PatchSpec& p) {
    Tensor<float> t(1, 3, p.height, p.width);
    std::copy(p.pixels.begin(), p.pixels.end(), t.data.begin());
    return t;
}

}  // namespace

Tensor<float> apply_patch(const Tensor<float>& image, const PatchSpec& patch,
                          int jitter_dy, int jitter_dx, bool smooth, float noise_sigma,
                          Rng* noise_rng) {
    int top = patch.top + jitter_dy;
    int left = patch.left + jitter_dx;
    if (top < 0 || left < 0 || top + patch.height > image.h || left + patch.width > image.w)
        throw DataError("apply_patch: placement out of bounds");

    Tensor<float> out = image;
    Tensor<float> px = patch_tensor(patch);
    if (smooth) px = avgpool3x3_fwd(px);
    if (noise_rng && noise_sigma > 0.0f)
        for (float& v : px.data) v += static_cast<float>(noise_rng->normal() * noise_sigma);

    size_t plane = static_cast<size_t>(image.h) * image.w;
    size_t pplane = static_cast<size_t>(patch.height) * patch.width;
    for (int ch = 0; ch < 3; ++ch)
        for (int y = 0; y < patch.height; ++y)
            for (int x = 0; x < patch.width; ++x)
                out.data[ch * plane + static_cast<size_t>(top + y) * image.w + left + x] =
                    px.data[ch * pplane + static_cast<size_t>(y) * patch.width + x];
    return out;
}

AttackResult momentum_patch_attack(const NetworkSpec& net, const ModelParams& params,
                                   const Tensor<float>& image, const AttackTarget& target,
                                   PatchSpec patch0, const AttackConfig& cfg) {
    if (image.h != target.h || image.w != target.w)
        throw DataError("momentum_patch_attack: target shape mismatch");
    if (patch0.top < 0 || patch0.left < 0 || patch0.top + patch0.height > image.h ||
        patch0.left + patch0.width > image.w)
        throw DataError("momentum_patch_attack: patch does not fit the image");

    Engine<float> eng(net, params);
    Rng rng(cfg.seed);

    PatchSpec patch = patch0;
    const size_t npx = patch.pixels.size();
    std::vector<float> g(npx, 0.0f);
    std::vector<float> grad(npx, 0.0f);

    AttackResult result;
    result.patch = patch;
    result.loss_trace.reserve(cfg.iterations);

    size_t plane = static_cast<size_t>(image.h) * image.w;
    size_t pplane = static_cast<size_t>(patch.height) * patch.width;

    // loss and patch-pixel gradient of one composited transform
    auto eval = [&](int dy, int dx, float brightness, Rng* noise) {
        Tensor<float> composite = apply_patch(image, patch, dy, dx, cfg.smooth,
                                              noise ? cfg.noise_sigma : 0.0f, noise);
        if (brightness != 1.0f)
            for (float& v : composite.data) v *= brightness;
        Tensor<float> logits = eng.forward(composite);
        LossResult<float> lr = softmax_ce_loss(logits, target.classes, target.roi_weights);
        Tensor<float> dimg = eng.backward(lr.dlogits, false);
        // collect the gradient of the written region
        Tensor<float> dregion(1, 3, patch.height, patch.width);
        int top = patch.top + dy, left = patch.left + dx;
        for (int ch = 0; ch < 3; ++ch)
            for (int y = 0; y < patch.height; ++y)
                for (int x = 0; x < patch.width; ++x)
                    dregion.data[ch * pplane + static_cast<size_t>(y) * patch.width + x] =
                        dimg.data[ch * plane + static_cast<size_t>(top + y) * image.w + left + x] *
                        brightness;
        if (cfg.smooth) dregion = avgpool3x3_bwd(dregion, dregion);
        return std::pair<float, Tensor<float>>(lr.loss, std::move(dregion));
    };

    for (int it = 0; it < cfg.iterations; ++it) {
        std::fill(grad.begin(), grad.end(), 0.0f);
        float loss;
        if (cfg.eot) {
            loss = 0.0f;
            for (int t = 0; t < cfg.eot_batch; ++t) {
                int dy = rng.uniform_int(-cfg.max_jitter, cfg.max_jitter);
                int dx = rng.uniform_int(-cfg.max_jitter, cfg.max_jitter);
                // clamp jitter so the placement stays in bounds
                dy = std::clamp(dy, -patch.top, image.h - patch.height - patch.top);
                dx = std::clamp(dx, -patch.left, image.w - patch.width - patch.left);
                float brightness = static_cast<float>(rng.uniform(0.9, 1.1));
                auto [l, dregion] = eval(dy, dx, brightness, &rng);
                loss += l;
                for (size_t i = 0; i < npx; ++i) grad[i] += dregion.data[i];
            }
            loss /= static_cast<float>(cfg.eot_batch);
            for (float& v : grad) v /= static_cast<float>(cfg.eot_batch);
        } else {
            auto [l, dregion] = eval(0, 0, 1.0f, nullptr);
            loss = l;
            std::copy(dregion.data.begin(), dregion.data.end(), grad.begin());
        }
        if (!std::isfinite(loss))
            throw NumericalError("momentum_patch_attack: non-finite loss at iteration " +
                                 std::to_string(it));

        result.loss_trace.push_back(loss);
        if (result.best_iteration < 0 || loss < result.best_loss) {
            result.best_loss = loss;
            result.best_iteration = it;
            result.patch = patch;
        }

        float l1 = 0.0f;
        for (float v : grad) l1 += std::abs(v);
        if (l1 > 0.0f)
            for (size_t i = 0; i < npx; ++i) g[i] = cfg.momentum * g[i] + grad[i] / l1;
        else
            for (size_t i = 0; i < npx; ++i) g[i] = cfg.momentum * g[i];

        for (size_t i = 0; i < npx; ++i) {
            float s = g[i] > 0.0f ? 1.0f : (g[i] < 0.0f ? -1.0f : 0.0f);
            patch.pixels[i] = std::clamp(patch.pixels[i] - cfg.step * s, 0.0f, 1.0f);
        }
    }

    return result;
}

EffectResult measure_effect(const NetworkSpec& net, const ModelParams& params,
                            const Tensor<float>& image, const PatchSpec& patch,
                            const AttackTarget& target, bool smooth) {
    Engine<float> eng(net, params);
    EffectResult r;
    r.argmax_before = argmax_map(eng.forward(image));
    Tensor<float> patched = apply_patch(image, patch, 0, 0, smooth, 0.0f, nullptr);
    r.argmax_after = argmax_map(eng.forward(patched));

    r.changed_mask = BinaryMask(image.h, image.w);
    for (size_t p = 0; p < r.argmax_before.size(); ++p) {
        if (r.argmax_before[p] != r.argmax_after[p]) {
            r.changed_mask.bits[p] = 1;
            ++r.changed_pixels;
        }
    }

    double wsum = 0.0, hit = 0.0;
    for (size_t p = 0; p < r.argmax_after.size(); ++p) {
        double w = target.roi_weights[p];
        wsum += w;
        if (r.argmax_after[p] == target.classes[p]) hit += w;
    }
    r.agreement = wsum > 0.0 ? hit / wsum : 0.0;
    return r;
}

double agreement_on(const std::vector<uint8_t>& argmax, const AttackTarget& target,
                    const std::vector<bool>& restrict_to) {
    long total = 0, hit = 0;
    for (size_t p = 0; p < argmax.size(); ++p) {
        if (!restrict_to[p]) continue;
        ++total;
        if (argmax[p] == target.classes[p]) ++hit;
    }
    return total > 0 ? static_cast<double>(hit) / static_cast<double>(total) : 0.0;
}

}  // namespace patchfeas
