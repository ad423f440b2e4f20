#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "patchfeas/archspec.hpp"
#include "patchfeas/bigcount.hpp"

namespace patchfeas {

// Sum limit used for the product-of-binomial-sums bound on a stack of
// convolutional layers:
//   as_printed      — every layer's sum runs up to the patch input volume
//   per_layer_input — layer l's sum runs up to the volume entering layer l
enum class BoundMode { as_printed, per_layer_input };

const char* to_string(BoundMode m);
BoundMode bound_mode_from_string(const std::string& s);

// Sum_{i=0}^{min(k,n)} C(n, i), exact. binom_sum(n, k) == 2^n for k >= n.
BigCount binom_sum(long n, long k);

// Linear-region upper bound of one fully connected ReLU layer with n0 inputs
// and n1 outputs.
BigCount fc_region_bound(long n0, long n1);

// Per-layer multiplier: Sum_{i=0}^{in_vol} C(out_vol, i).
BigCount layer_multiplier(Shape3 in_shape, Shape3 out_shape);

// One factor per layer that feeds a ReLU, with the shapes the layer takes
// inside the patch's receptive field.
struct BoundFactor {
    int layer_index;
    long long in_vol;
    long long out_vol;
    BigCount factor;
};

struct ConvRegionBound {
    BigCount total;
    std::vector<BoundFactor> factors;
};

// Upper bound on linear regions generated by the conv stack of `net` when the
// input is a patch of shape `patch_input_shape`. Layers not followed by a
// ReLU contribute no factor; a network without ReLUs bounds to 1.
ConvRegionBound conv_region_bound(const NetworkSpec& net, Shape3 patch_input_shape,
                                  BoundMode mode);

struct FeasibilityQuery {
    std::optional<BigCount> bound;    // exact when available
    std::optional<double> log10_bound;  // magnitude-only fallback
    unsigned classes = 2;             // D
};

struct FeasibilityResult {
    long max_area = 0;      // largest WH with D^WH strictly below the bound
    long max_side = 0;      // floor(sqrt(max_area))
    // Set when the query was log10-only and the quotient log10(bound)/log10(D)
    // sits within 1e-9 of an integer, so max_area could be off by one.
    bool warn_band = false;
};

// Largest output area over which every one of the D^WH class maps could in
// principle be realized, given the region-count bound. Ties exclude:
// D^WH < bound <= D^(WH+1). A bound below D yields area 0.
FeasibilityResult feasible_region(const FeasibilityQuery& q);

// Parameters of a small fully connected ReLU network (weights[l] is
// out_units x in_units). Used by the brute-force region counter.
struct FcParams {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
};

struct InputBox {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
};

// Counts distinct ReLU activation sign patterns over a dense grid on the
// input box: a lower bound on the true region count, converging to it with
// resolution for generic weights. Restricted to input dim <= 2, at most
// 3 ReLU layers of at most 8 units each.
long count_regions_exact(const NetworkSpec& net, const FcParams& params,
                         const InputBox& domain, int resolution);

// Seeded random parameters for a fully connected spec (uniform in [-1, 1]).
FcParams random_fc_params(const NetworkSpec& net, unsigned long seed);

}  // namespace patchfeas
