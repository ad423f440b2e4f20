#include "patchfeas/model.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace patchfeas {

size_t weight_count(const NetworkSpec& net, int layer_index) {
    const LayerSpec& l = net.layers.at(layer_index);
    switch (l.kind) {
        case LayerKind::relu:
            return 0;
        case LayerKind::fully_connected:
            return static_cast<size_t>(l.in_units) * l.out_units;
        default:
            return static_cast<size_t>(l.in_channels) * l.out_channels * l.kernel_h * l.kernel_w;
    }
}

size_t bias_count(const NetworkSpec& net, int layer_index) {
    const LayerSpec& l = net.layers.at(layer_index);
    switch (l.kind) {
        case LayerKind::relu:
            return 0;
        case LayerKind::fully_connected:
            return static_cast<size_t>(l.out_units);
        default:
            return static_cast<size_t>(l.out_channels);
    }
}

ModelParams init_params(const NetworkSpec& net, uint64_t seed) {
    Rng rng(seed);
    ModelParams p;
    for (size_t i = 0; i < net.layers.size(); ++i) {
        const LayerSpec& l = net.layers[i];
        size_t wc = weight_count(net, static_cast<int>(i));
        size_t bc = bias_count(net, static_cast<int>(i));
        long fan_in = 1;
        if (l.kind == LayerKind::fully_connected) {
            fan_in = l.in_units;
        } else if (wc > 0) {
            fan_in = static_cast<long>(l.in_channels) * l.kernel_h * l.kernel_w;
        }
        float bound = std::sqrt(6.0f / static_cast<float>(fan_in));
        std::vector<float> w(wc), b(bc, 0.0f);
        for (float& v : w) v = static_cast<float>(rng.uniform(-bound, bound));
        p.weights.push_back(std::move(w));
        p.biases.push_back(std::move(b));
    }
    return p;
}

namespace {

constexpr char kMagic[5] = {'P', 'S', 'E', 'G', '1'};

template <typename T>
void put(std::vector<char>& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.insert(out.end(), buf, buf + sizeof(T));
}

}  // namespace

std::vector<char> serialize_model(const NetworkSpec& net, const ModelParams& p) {
    if (p.weights.size() != net.layers.size() || p.biases.size() != net.layers.size())
        throw DataError("serialize_model: parameter/layer count mismatch");
    std::vector<char> out(kMagic, kMagic + 5);
    std::string spec_json = print_spec(net);
    put<uint32_t>(out, static_cast<uint32_t>(spec_json.size()));
    out.insert(out.end(), spec_json.begin(), spec_json.end());
    for (size_t i = 0; i < net.layers.size(); ++i) {
        if (p.weights[i].size() != weight_count(net, static_cast<int>(i)) ||
            p.biases[i].size() != bias_count(net, static_cast<int>(i)))
            throw DataError("serialize_model: blob size mismatch at layer " + std::to_string(i));
        const char* wb = reinterpret_cast<const char*>(p.weights[i].data());
        out.insert(out.end(), wb, wb + p.weights[i].size() * sizeof(float));
        const char* bb = reinterpret_cast<const char*>(p.biases[i].data());
        out.insert(out.end(), bb, bb + p.biases[i].size() * sizeof(float));
    }
    return out;
}

void save_model(const std::string& path, const NetworkSpec& net, const ModelParams& p) {
    std::vector<char> bytes = serialize_model(net, p);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot open model file for writing: " + path);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw DataError("failed writing model file: " + path);
}

LoadedModel load_model(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open model file: " + path);
    std::vector<char> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

    size_t pos = 0;
    auto need = [&](size_t n) {
        if (pos + n > bytes.size()) throw DataError("model file truncated: " + path);
    };
    need(5);
    if (std::memcmp(bytes.data(), kMagic, 5) != 0)
        throw DataError("not a model file (bad magic): " + path);
    pos = 5;
    need(4);
    uint32_t json_len;
    std::memcpy(&json_len, bytes.data() + pos, 4);
    pos += 4;
    need(json_len);
    std::string spec_json(bytes.data() + pos, json_len);
    pos += json_len;

    LoadedModel m;
    NetworkSpec net = parse_spec(spec_json);
    m.spec = propagate_shapes(net, net.input);
    for (size_t i = 0; i < m.spec.layers.size(); ++i) {
        size_t wc = weight_count(m.spec, static_cast<int>(i));
        size_t bc = bias_count(m.spec, static_cast<int>(i));
        need((wc + bc) * sizeof(float));
        std::vector<float> w(wc), b(bc);
        std::memcpy(w.data(), bytes.data() + pos, wc * sizeof(float));
        pos += wc * sizeof(float);
        std::memcpy(b.data(), bytes.data() + pos, bc * sizeof(float));
        pos += bc * sizeof(float);
        m.params.weights.push_back(std::move(w));
        m.params.biases.push_back(std::move(b));
    }
    if (pos != bytes.size()) throw DataError("trailing bytes in model file: " + path);
    return m;
}

}  // namespace patchfeas
