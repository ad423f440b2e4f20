#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "patchfeas/pnm.hpp"
#include "patchfeas/tensor.hpp"

namespace patchfeas {

// Class indices of the synthetic shapes task.
enum : uint8_t {
    kClassBackground = 0,
    kClassSquare = 1,
    kClassDisk = 2,
    kClassTriangle = 3,
};
constexpr int kNumClasses = 4;

struct ShapesSample {
    int size = 0;
    std::vector<float> image;    // 3 x size x size, channel-major, values in [0,1]
    std::vector<uint8_t> labels; // size x size class indices

    Tensor<float> to_tensor() const;
};

// Deterministic-from-seed synthetic segmentation data: 1-4 shapes per image
// (random kind, position, 8-24 px size, fill color), later shapes occlude
// earlier ones, a global illumination factor and additive Gaussian pixel
// noise (sigma 0.02). Labels are rendered from the same geometry.
std::vector<ShapesSample> gen_shapes_dataset(int count, int image_size, uint64_t seed);

// Quantized to 8-bit PPM/PGM pairs NNNNN.ppm / NNNNN.pgm plus meta.json.
void write_dataset(const std::string& dir, const std::vector<ShapesSample>& samples,
                   int image_size, uint64_t seed);
std::vector<ShapesSample> load_dataset(const std::string& dir);

RgbImage to_rgb8(const std::vector<float>& image, int h, int w);
std::vector<float> from_rgb8(const RgbImage& img);

double pixel_accuracy(const std::vector<uint8_t>& pred, const std::vector<uint8_t>& labels);

}  // namespace patchfeas
