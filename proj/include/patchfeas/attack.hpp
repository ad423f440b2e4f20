#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "patchfeas/geometry.hpp"
#include "patchfeas/model.hpp"
#include "patchfeas/rfield.hpp"
#include "patchfeas/tensor.hpp"

namespace patchfeas {

// Rectangular pixel patch that replaces image content.
struct PatchSpec {
    int height = 0, width = 0;
    int top = 0, left = 0;
    std::vector<float> pixels;  // 3 x h x w channel-major, values in [0,1]

    static PatchSpec gray(int h, int w, int top, int left);
    PixelBox box() const { return PixelBox{top, left, height, width}; }
};

struct AttackTarget {
    int h = 0, w = 0;
    std::vector<uint8_t> classes;   // per-pixel desired class
    std::vector<float> roi_weights; // nonnegative, zero outside the region of interest
};

enum class TargetKind { class_switch, erase, custom };

// class_switch relabels every `from` pixel to `to`; erase sends an object
// class to background; custom loads a class map verbatim. roi weights are 1
// everywhere.
AttackTarget build_target_class_switch(const std::vector<uint8_t>& labels, int h, int w,
                                       uint8_t from, uint8_t to);
AttackTarget build_target_erase(const std::vector<uint8_t>& labels, int h, int w,
                                uint8_t object_class);
AttackTarget build_target_custom(const std::vector<uint8_t>& mask, int h, int w,
                                 int num_classes);

struct AttackConfig {
    int iterations = 5000;
    float step = 0.01f;      // sign-step size
    float momentum = 0.9f;
    bool eot = false;        // jitter + brightness + patch noise transforms
    int max_jitter = 2;      // pixels
    float noise_sigma = 0.02f;
    bool smooth = false;     // optimize through 3x3 stride-1 average pooling
    uint64_t seed = 0;
    int eot_batch = 8;
};

// Image copy with the (optionally smoothed, noise-perturbed) patch written at
// its placement shifted by (jitter_dy, jitter_dx); all other pixels are
// bit-identical to the input. `noise_rng` null means no noise.
Tensor<float> apply_patch(const Tensor<float>& image, const PatchSpec& patch,
                          int jitter_dy, int jitter_dx, bool smooth, float noise_sigma,
                          Rng* noise_rng);

struct AttackResult {
    PatchSpec patch;                // best-loss patch
    std::vector<float> loss_trace;  // per-iteration objective
    float best_loss = 0.0f;
    int best_iteration = -1;
};

// Momentum-iterative sign attack restricted to the patch pixels:
//   g <- momentum * g + grad / ||grad||_1, patch <- clip(patch - step * sign(g)).
// With EOT on, the gradient is averaged over eot_batch jitter/brightness/noise
// transforms per iteration. Throws NumericalError on non-finite loss.
AttackResult momentum_patch_attack(const NetworkSpec& net, const ModelParams& params,
                                   const Tensor<float>& image, const AttackTarget& target,
                                   PatchSpec patch0, const AttackConfig& cfg);

struct EffectResult {
    long changed_pixels = 0;
    double agreement = 0.0;  // roi-weighted fraction of pixels matching the target
    BinaryMask changed_mask;
    std::vector<uint8_t> argmax_before;
    std::vector<uint8_t> argmax_after;
};

EffectResult measure_effect(const NetworkSpec& net, const ModelParams& params,
                            const Tensor<float>& image, const PatchSpec& patch,
                            const AttackTarget& target, bool smooth = false);

// Fraction of target-matching pixels restricted to where `restrict_to`
// is true (e.g. the pixels the target actually relabels).
double agreement_on(const std::vector<uint8_t>& argmax, const AttackTarget& target,
                    const std::vector<bool>& restrict_to);

}  // namespace patchfeas
