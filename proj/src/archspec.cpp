#include "patchfeas/archspec.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace patchfeas {

using nlohmann::json;

const char* to_string(LayerKind kind) {
    switch (kind) {
        case LayerKind::conv: return "conv";
        case LayerKind::conv_strided: return "conv_strided";
        case LayerKind::conv_transpose: return "conv_transpose";
        case LayerKind::relu: return "relu";
        case LayerKind::fully_connected: return "fully_connected";
    }
    return "?";
}

LayerKind layer_kind_from_string(const std::string& s) {
    if (s == "conv") return LayerKind::conv;
    if (s == "conv_strided") return LayerKind::conv_strided;
    if (s == "conv_transpose") return LayerKind::conv_transpose;
    if (s == "relu") return LayerKind::relu;
    if (s == "fully_connected") return LayerKind::fully_connected;
    throw SpecError("unknown layer kind: '" + s + "'");
}

ConvGeom conv_geom(int in, int k, int stride) {
    int out = (in + stride - 1) / stride;
    int total_pad = std::max((out - 1) * stride + k - in, 0);
    return {out, total_pad / 2};
}

TConvGeom tconv_geom(int in, int k, int stride) {
    int pad = std::clamp((k - stride + 1) / 2, 0, std::max(k - stride, 0));
    return {in * stride, pad};
}

static bool is_conv_like(LayerKind k) {
    return k == LayerKind::conv || k == LayerKind::conv_strided ||
           k == LayerKind::conv_transpose;
}

namespace {

int get_positive_int(const json& obj, const char* key, const std::string& ctx) {
    if (!obj.contains(key))
        throw SpecError(ctx + ": missing key '" + key + "'");
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        throw SpecError(ctx + ": key '" + key + "' must be an integer");
    int i = v.get<int>();
    if (i <= 0)
        throw SpecError(ctx + ": key '" + key + "' must be positive, got " +
                        std::to_string(i));
    return i;
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& ctx) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = std::any_of(allowed.begin(), allowed.end(),
                                 [&](const char* k) { return it.key() == k; });
        if (!known) throw SpecError(ctx + ": unknown key '" + it.key() + "'");
    }
}

}  // namespace

NetworkSpec parse_spec(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SpecError("syntax error at byte " + std::to_string(e.byte) + ": " +
                        e.what());
    }
    if (!doc.is_object()) throw SpecError("top level must be a JSON object");
    reject_unknown_keys(doc, {"name", "input", "layers"}, "top level");

    NetworkSpec net;
    if (!doc.contains("name") || !doc.at("name").is_string())
        throw SpecError("top level: 'name' must be a string");
    net.name = doc.at("name").get<std::string>();

    if (!doc.contains("input") || !doc.at("input").is_array() ||
        doc.at("input").size() != 3)
        throw SpecError("top level: 'input' must be [channels, height, width]");
    net.input.c = doc.at("input")[0].get<int>();
    net.input.h = doc.at("input")[1].get<int>();
    net.input.w = doc.at("input")[2].get<int>();
    if (net.input.c < 1 || net.input.h < 1 || net.input.w < 1)
        throw SpecError("top level: input dims must be >= 1");

    if (!doc.contains("layers") || !doc.at("layers").is_array())
        throw SpecError("top level: 'layers' must be an array");

    int idx = 0;
    for (const json& jl : doc.at("layers")) {
        std::string ctx = "layer " + std::to_string(idx);
        if (!jl.is_object()) throw SpecError(ctx + ": must be an object");
        if (!jl.contains("kind") || !jl.at("kind").is_string())
            throw SpecError(ctx + ": 'kind' must be a string");

        LayerSpec l;
        l.kind = layer_kind_from_string(jl.at("kind").get<std::string>());
        switch (l.kind) {
            case LayerKind::relu:
                reject_unknown_keys(jl, {"kind"}, ctx);
                break;
            case LayerKind::fully_connected:
                reject_unknown_keys(jl, {"kind", "in_units", "out_units"}, ctx);
                l.in_units = get_positive_int(jl, "in_units", ctx);
                l.out_units = get_positive_int(jl, "out_units", ctx);
                break;
            default: {
                reject_unknown_keys(jl,
                                    {"kind", "kernel", "stride", "in_channels",
                                     "out_channels", "concat_with"},
                                    ctx);
                if (!jl.contains("kernel") || !jl.at("kernel").is_array() ||
                    jl.at("kernel").size() != 2)
                    throw SpecError(ctx + ": 'kernel' must be [kh, kw]");
                l.kernel_h = jl.at("kernel")[0].get<int>();
                l.kernel_w = jl.at("kernel")[1].get<int>();
                if (l.kernel_h < 1 || l.kernel_w < 1)
                    throw SpecError(ctx + ": kernel dims must be >= 1");
                l.stride = get_positive_int(jl, "stride", ctx);
                l.in_channels = get_positive_int(jl, "in_channels", ctx);
                l.out_channels = get_positive_int(jl, "out_channels", ctx);
                if (jl.contains("concat_with")) {
                    l.concat_with = jl.at("concat_with").get<int>();
                    if (l.concat_with < 0 || l.concat_with >= idx)
                        throw SpecError(ctx + ": 'concat_with' must reference an earlier layer");
                }
                break;
            }
        }
        net.layers.push_back(l);
        ++idx;
    }

    validate(net);
    return net;
}

NetworkSpec parse_spec_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open spec file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_spec(ss.str());
}

std::string print_spec(const NetworkSpec& net) {
    json doc;
    doc["name"] = net.name;
    doc["input"] = {net.input.c, net.input.h, net.input.w};
    doc["layers"] = json::array();
    for (const LayerSpec& l : net.layers) {
        json jl;
        jl["kind"] = to_string(l.kind);
        if (l.kind == LayerKind::fully_connected) {
            jl["in_units"] = l.in_units;
            jl["out_units"] = l.out_units;
        } else if (is_conv_like(l.kind)) {
            jl["kernel"] = {l.kernel_h, l.kernel_w};
            jl["stride"] = l.stride;
            jl["in_channels"] = l.in_channels;
            jl["out_channels"] = l.out_channels;
            if (l.concat_with >= 0) jl["concat_with"] = l.concat_with;
        }
        doc["layers"].push_back(jl);
    }
    return doc.dump(2) + "\n";
}

// Channel count produced by layer i, walking relu transparency backwards.
static int out_channels_of(const NetworkSpec& net, int i, int input_c) {
    for (int j = i; j >= 0; --j) {
        const LayerSpec& l = net.layers[j];
        if (is_conv_like(l.kind)) return l.out_channels;
        if (l.kind == LayerKind::fully_connected) return l.out_units;
        // relu: look further back
    }
    return input_c;
}

void validate(const NetworkSpec& net) {
    for (size_t i = 0; i < net.layers.size(); ++i) {
        const LayerSpec& l = net.layers[i];
        std::string ctx = "layer " + std::to_string(i);
        if (is_conv_like(l.kind)) {
            if (l.kernel_h < 1 || l.kernel_w < 1 || l.stride < 1 ||
                l.in_channels < 1 || l.out_channels < 1)
                throw SpecError(ctx + ": nonpositive dims");
            if (l.concat_with >= static_cast<int>(i))
                throw SpecError(ctx + ": concat_with must reference an earlier layer");
            int expected = out_channels_of(net, static_cast<int>(i) - 1, net.input.c);
            if (l.concat_with >= 0)
                expected += out_channels_of(net, l.concat_with, net.input.c);
            if (l.in_channels != expected)
                throw SpecError(ctx + ": channel mismatch, in_channels=" +
                                std::to_string(l.in_channels) + " but preceding layers produce " +
                                std::to_string(expected));
        } else if (l.kind == LayerKind::fully_connected) {
            if (l.in_units < 1 || l.out_units < 1)
                throw SpecError(ctx + ": nonpositive unit counts");
        }
    }
}

NetworkSpec propagate_shapes(NetworkSpec net, Shape3 input) {
    if (input.c < 1 || input.h < 1 || input.w < 1)
        throw SpecError("input dims must be >= 1");
    net.input = input;
    validate(net);
    net.shapes.clear();
    net.shapes.reserve(net.layers.size());

    Shape3 cur = input;
    for (size_t i = 0; i < net.layers.size(); ++i) {
        const LayerSpec& l = net.layers[i];
        Shape3 out = cur;
        switch (l.kind) {
            case LayerKind::relu:
                break;
            case LayerKind::conv:
                out.c = l.out_channels;
                break;
            case LayerKind::conv_strided:
                out.c = l.out_channels;
                out.h = conv_geom(cur.h, l.kernel_h, l.stride).out;
                out.w = conv_geom(cur.w, l.kernel_w, l.stride).out;
                break;
            case LayerKind::conv_transpose:
                out.c = l.out_channels;
                out.h = cur.h * l.stride;
                out.w = cur.w * l.stride;
                break;
            case LayerKind::fully_connected:
                if (cur.vol() != l.in_units)
                    throw SpecError("layer " + std::to_string(i) +
                                    ": fully_connected expects " + std::to_string(l.in_units) +
                                    " inputs but gets " + std::to_string(cur.vol()));
                out = Shape3{l.out_units, 1, 1};
                break;
        }
        if (out.c < 1 || out.h < 1 || out.w < 1)
            throw SpecError("layer " + std::to_string(i) + ": shape collapse to " +
                            std::to_string(out.c) + "x" + std::to_string(out.h) + "x" +
                            std::to_string(out.w));
        net.shapes.push_back(out);
        cur = out;
    }
    return net;
}

Shape3 shape_before(const NetworkSpec& net, int layer_index) {
    return layer_index == 0 ? net.input : net.shapes.at(layer_index - 1);
}

int input_channels_at(const NetworkSpec& net, int layer_index) {
    int c = shape_before(net, layer_index).c;
    int src = net.layers.at(layer_index).concat_with;
    if (src >= 0) c += net.shapes.at(src).c;
    return c;
}

}  // namespace patchfeas
