#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "patchfeas/errors.hpp"

namespace patchfeas {

struct RgbImage {
    int height = 0;
    int width = 0;
    std::vector<uint8_t> pixels;  // row-major, interleaved RGB
};

struct GrayImage {
    int height = 0;
    int width = 0;
    std::vector<uint8_t> pixels;  // row-major
};

// Binary PPM (P6, maxval 255) and PGM (P5, maxval 255).
void write_ppm(const std::string& path, const RgbImage& img);
RgbImage read_ppm(const std::string& path);
void write_pgm(const std::string& path, const GrayImage& img);
GrayImage read_pgm(const std::string& path);

std::vector<char> encode_ppm(const RgbImage& img);
std::vector<char> encode_pgm(const GrayImage& img);

}  // namespace patchfeas
