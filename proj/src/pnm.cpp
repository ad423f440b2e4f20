#include "patchfeas/pnm.hpp"

#include <fstream>
#include <sstream>

namespace patchfeas {

namespace {

void write_file(const std::string& path, const std::vector<char>& bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot open for writing: " + path);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw DataError("failed writing: " + path);
}

// Reads the PNM header (magic, dims, maxval) allowing '#' comments, returns
// the offset of the raster.
struct PnmHeader {
    int width, height, maxval;
    size_t raster_offset;
};

PnmHeader parse_header(const std::vector<char>& bytes, const char* magic, const std::string& path) {
    if (bytes.size() < 2 || bytes[0] != magic[0] || bytes[1] != magic[1])
        throw DataError("bad magic in " + path + " (expected " + magic + ")");
    size_t pos = 2;
    auto next_token = [&]() -> long {
        while (pos < bytes.size()) {
            char ch = bytes[pos];
            if (ch == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
                ++pos;
            } else {
                break;
            }
        }
        if (pos >= bytes.size() || bytes[pos] < '0' || bytes[pos] > '9')
            throw DataError("malformed header in " + path);
        long v = 0;
        while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9')
            v = v * 10 + (bytes[pos++] - '0');
        return v;
    };
    PnmHeader h;
    h.width = static_cast<int>(next_token());
    h.height = static_cast<int>(next_token());
    h.maxval = static_cast<int>(next_token());
    if (pos >= bytes.size()) throw DataError("truncated header in " + path);
    ++pos;  // single whitespace byte after maxval
    h.raster_offset = pos;
    if (h.width < 1 || h.height < 1) throw DataError("bad dimensions in " + path);
    if (h.maxval != 255) throw DataError("unsupported maxval in " + path + " (only 255)");
    return h;
}

std::vector<char> read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open: " + path);
    return std::vector<char>((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

}  // namespace

std::vector<char> encode_ppm(const RgbImage& img) {
    std::ostringstream hdr;
    hdr << "P6\n" << img.width << " " << img.height << "\n255\n";
    std::string h = hdr.str();
    std::vector<char> out(h.begin(), h.end());
    out.insert(out.end(), img.pixels.begin(), img.pixels.end());
    return out;
}

std::vector<char> encode_pgm(const GrayImage& img) {
    std::ostringstream hdr;
    hdr << "P5\n" << img.width << " " << img.height << "\n255\n";
    std::string h = hdr.str();
    std::vector<char> out(h.begin(), h.end());
    out.insert(out.end(), img.pixels.begin(), img.pixels.end());
    return out;
}

void write_ppm(const std::string& path, const RgbImage& img) {
    if (img.pixels.size() != static_cast<size_t>(img.width) * img.height * 3)
        throw DataError("write_ppm: pixel buffer size mismatch");
    write_file(path, encode_ppm(img));
}

void write_pgm(const std::string& path, const GrayImage& img) {
    if (img.pixels.size() != static_cast<size_t>(img.width) * img.height)
        throw DataError("write_pgm: pixel buffer size mismatch");
    write_file(path, encode_pgm(img));
}

RgbImage read_ppm(const std::string& path) {
    std::vector<char> bytes = read_file(path);
    PnmHeader h = parse_header(bytes, "P6", path);
    size_t need = static_cast<size_t>(h.width) * h.height * 3;
    if (bytes.size() - h.raster_offset < need) throw DataError("truncated raster in " + path);
    RgbImage img{h.height, h.width, {}};
    img.pixels.assign(bytes.begin() + h.raster_offset, bytes.begin() + h.raster_offset + need);
    return img;
}

GrayImage read_pgm(const std::string& path) {
    std::vector<char> bytes = read_file(path);
    PnmHeader h = parse_header(bytes, "P5", path);
    size_t need = static_cast<size_t>(h.width) * h.height;
    if (bytes.size() - h.raster_offset < need) throw DataError("truncated raster in " + path);
    GrayImage img{h.height, h.width, {}};
    img.pixels.assign(bytes.begin() + h.raster_offset, bytes.begin() + h.raster_offset + need);
    return img;
}

}  // namespace patchfeas
