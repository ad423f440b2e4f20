#include "patchfeas/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "patchfeas/rng.hpp"

namespace patchfeas {

namespace fs = std::filesystem;

Tensor<float> ShapesSample::to_tensor() const {
    Tensor<float> t(1, 3, size, size);
    std::copy(image.begin(), image.end(), t.data.begin());
    return t;
}

namespace {

struct Shape {
    uint8_t cls;       // 1 square, 2 disk, 3 triangle
    double cy, cx;     // center
    double half;       // half extent
    float color[3];

    bool covers(int y, int x) const {
        double dy = y - cy, dx = x - cx;
        switch (cls) {
            case kClassSquare:
                return std::abs(dy) <= half && std::abs(dx) <= half;
            case kClassDisk:
                return dy * dy + dx * dx <= half * half;
            default: {
                // upward triangle: apex at cy-half, base at cy+half
                if (dy < -half || dy > half) return false;
                double w = (dy + half) / 2.0;  // half width at this row
                return std::abs(dx) <= w;
            }
        }
    }
};

}  // namespace

std::vector<ShapesSample> gen_shapes_dataset(int count, int image_size, uint64_t seed) {
    if (count < 0) throw DataError("gen_shapes_dataset: negative count");
    if (count > 0 && image_size < 32) throw DataError("gen_shapes_dataset: image_size must be >= 32");

    Rng rng(seed);
    std::vector<ShapesSample> out;
    out.reserve(count);

    for (int s = 0; s < count; ++s) {
        ShapesSample sample;
        sample.size = image_size;
        sample.image.assign(static_cast<size_t>(3) * image_size * image_size, 0.0f);
        sample.labels.assign(static_cast<size_t>(image_size) * image_size, kClassBackground);

        float bg[3];
        for (float& v : bg) v = static_cast<float>(rng.uniform(0.05, 0.35));

        int nshapes = rng.uniform_int(1, 4);
        std::vector<Shape> shapes;
        for (int i = 0; i < nshapes; ++i) {
            Shape sh;
            sh.cls = static_cast<uint8_t>(rng.uniform_int(1, 3));
            double sz = rng.uniform(8.0, 24.0);  // full extent in pixels
            sh.half = sz / 2.0;
            sh.cy = rng.uniform(sh.half, image_size - sh.half);
            sh.cx = rng.uniform(sh.half, image_size - sh.half);
            for (float& v : sh.color) v = static_cast<float>(rng.uniform(0.3, 1.0));
            shapes.push_back(sh);
        }

        double illum = rng.uniform(0.8, 1.0);
        const size_t plane = static_cast<size_t>(image_size) * image_size;

        for (int y = 0; y < image_size; ++y) {
            for (int x = 0; x < image_size; ++x) {
                size_t p = static_cast<size_t>(y) * image_size + x;
                const float* color = bg;
                uint8_t cls = kClassBackground;
                // later shapes occlude earlier ones
                for (const Shape& sh : shapes) {
                    if (sh.covers(y, x)) {
                        color = sh.color;
                        cls = sh.cls;
                    }
                }
                sample.labels[p] = cls;
                for (int ch = 0; ch < 3; ++ch)
                    sample.image[ch * plane + p] = static_cast<float>(color[ch] * illum);
            }
        }
        for (float& v : sample.image) {
            v += static_cast<float>(rng.normal() * 0.02);
            v = std::clamp(v, 0.0f, 1.0f);
        }
        out.push_back(std::move(sample));
    }
    return out;
}

RgbImage to_rgb8(const std::vector<float>& image, int h, int w) {
    RgbImage img{h, w, std::vector<uint8_t>(static_cast<size_t>(h) * w * 3)};
    size_t plane = static_cast<size_t>(h) * w;
    for (size_t p = 0; p < plane; ++p)
        for (int ch = 0; ch < 3; ++ch) {
            float v = std::clamp(image[ch * plane + p], 0.0f, 1.0f);
            img.pixels[p * 3 + ch] = static_cast<uint8_t>(std::lround(v * 255.0f));
        }
    return img;
}

std::vector<float> from_rgb8(const RgbImage& img) {
    size_t plane = static_cast<size_t>(img.height) * img.width;
    std::vector<float> out(plane * 3);
    for (size_t p = 0; p < plane; ++p)
        for (int ch = 0; ch < 3; ++ch)
            out[ch * plane + p] = static_cast<float>(img.pixels[p * 3 + ch]) / 255.0f;
    return out;
}

void write_dataset(const std::string& dir, const std::vector<ShapesSample>& samples,
                   int image_size, uint64_t seed) {
    fs::create_directories(dir);
    char name[16];
    for (size_t i = 0; i < samples.size(); ++i) {
        const ShapesSample& s = samples[i];
        std::snprintf(name, sizeof(name), "%05zu", i);
        write_ppm(dir + "/" + name + ".ppm", to_rgb8(s.image, s.size, s.size));
        GrayImage g{s.size, s.size, s.labels};
        write_pgm(dir + "/" + name + ".pgm", g);
    }
    nlohmann::json meta;
    meta["count"] = samples.size();
    meta["size"] = image_size;
    meta["seed"] = seed;
    std::ofstream f(dir + "/meta.json", std::ios::trunc);
    if (!f) throw DataError("cannot write meta.json in " + dir);
    f << meta.dump(2) << "\n";
}

std::vector<ShapesSample> load_dataset(const std::string& dir) {
    std::ifstream mf(dir + "/meta.json");
    if (!mf) throw DataError("missing meta.json in " + dir);
    nlohmann::json meta = nlohmann::json::parse(mf);
    size_t count = meta.at("count").get<size_t>();
    int size = meta.at("size").get<int>();

    std::vector<ShapesSample> out;
    out.reserve(count);
    char name[16];
    for (size_t i = 0; i < count; ++i) {
        std::snprintf(name, sizeof(name), "%05zu", i);
        RgbImage img = read_ppm(dir + "/" + name + ".ppm");
        GrayImage lab = read_pgm(dir + "/" + name + ".pgm");
        if (img.height != size || img.width != size || lab.height != size || lab.width != size)
            throw DataError("sample size mismatch in " + dir);
        ShapesSample s;
        s.size = size;
        s.image = from_rgb8(img);
        s.labels = lab.pixels;
        out.push_back(std::move(s));
    }
    return out;
}

double pixel_accuracy(const std::vector<uint8_t>& pred, const std::vector<uint8_t>& labels) {
    if (pred.size() != labels.size() || pred.empty()) throw DataError("pixel_accuracy: size mismatch");
    size_t hit = 0;
    for (size_t i = 0; i < pred.size(); ++i)
        if (pred[i] == labels[i]) ++hit;
    return static_cast<double>(hit) / static_cast<double>(pred.size());
}

}  // namespace patchfeas
