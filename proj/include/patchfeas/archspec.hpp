#pragma once

#include <string>
#include <vector>

#include "patchfeas/errors.hpp"

namespace patchfeas {

enum class LayerKind { conv, conv_strided, conv_transpose, relu, fully_connected };

const char* to_string(LayerKind kind);
LayerKind layer_kind_from_string(const std::string& s);

struct LayerSpec {
    LayerKind kind = LayerKind::conv;
    // conv / conv_strided / conv_transpose
    int kernel_h = 0;
    int kernel_w = 0;
    int stride = 1;
    int in_channels = 0;
    int out_channels = 0;
    // fully_connected
    int in_units = 0;
    int out_units = 0;
    // Index of an earlier layer whose output is channel-concatenated to this
    // layer's input (U-Net style skip). -1 means no skip input.
    int concat_with = -1;

    bool operator==(const LayerSpec&) const = default;
};

struct Shape3 {
    int c = 0;
    int h = 0;
    int w = 0;

    long long vol() const { return 1LL * c * h * w; }
    bool operator==(const Shape3&) const = default;
};

struct NetworkSpec {
    std::string name;
    Shape3 input;
    std::vector<LayerSpec> layers;
    // shapes[i] is the output shape of layers[i]; filled by propagate_shapes.
    std::vector<Shape3> shapes;

    bool shapes_ready() const { return shapes.size() == layers.size(); }

    bool operator==(const NetworkSpec& o) const {
        return name == o.name && input == o.input && layers == o.layers;
    }
};

// Same-padding output geometry shared by the engine, the receptive-field
// walk and the bounds walk.
//
// conv: out = ceil(in / stride), window for output o is
//       [o*stride - pad_lo, o*stride - pad_lo + k - 1].
struct ConvGeom {
    int out;
    int pad_lo;
};
ConvGeom conv_geom(int in, int k, int stride);

// conv_transpose: out = in * stride, input i scatters into outputs
//                 [i*stride - pad, i*stride - pad + k - 1].
struct TConvGeom {
    int out;
    int pad;
};
TConvGeom tconv_geom(int in, int k, int stride);

// Parses a JSON architecture document. Shapes are left unfilled.
// Throws SpecError on syntax errors (with byte offset), unknown kinds or
// keys, nonpositive dims, and channel mismatches between consecutive layers.
NetworkSpec parse_spec(const std::string& text);
NetworkSpec parse_spec_file(const std::string& path);

// Emits the JSON document form; parse_spec(print_spec(s)) == s.
std::string print_spec(const NetworkSpec& net);

// Structural validation without an input shape: positive dims, channel
// chaining (relu transparent), concat references.
void validate(const NetworkSpec& net);

// Fills per-layer output shapes starting from `input`. Throws SpecError if
// any spatial dim collapses to zero or the first layer does not accept the
// input channel count.
NetworkSpec propagate_shapes(NetworkSpec net, Shape3 input);

// Channel count entering layer i (previous layer output plus any concat
// source), given the propagated shapes.
int input_channels_at(const NetworkSpec& net, int layer_index);

// Output shape of the layer feeding layer i (the network input for i == 0),
// ignoring concat sources.
Shape3 shape_before(const NetworkSpec& net, int layer_index);

}  // namespace patchfeas
