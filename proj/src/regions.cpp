#include "patchfeas/regions.hpp"

#include <cmath>
#include <random>
#include <unordered_set>

#include "patchfeas/errors.hpp"

namespace patchfeas {

const char* to_string(BoundMode m) {
    return m == BoundMode::as_printed ? "as_printed" : "per_layer_input";
}

BoundMode bound_mode_from_string(const std::string& s) {
    if (s == "as_printed") return BoundMode::as_printed;
    if (s == "per_layer_input") return BoundMode::per_layer_input;
    throw DataError("unknown bound mode: '" + s + "'");
}

BigCount binom_sum(long n, long k) {
    if (n < 0 || k < 0) throw std::invalid_argument("binom_sum: negative argument");
    long top = std::min(n, k);
    // Rolling binomial C(n,i) = C(n,i-1)*(n-i+1)/i, exact division at each step.
    mpz_class c = 1;
    mpz_class sum = 1;
    for (long i = 1; i <= top; ++i) {
        mpz_mul_ui(c.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(n - i + 1));
        mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(i));
        sum += c;
    }
    return BigCount(sum);
}

BigCount fc_region_bound(long n0, long n1) {
    if (n0 < 1 || n1 < 1) throw std::invalid_argument("fc_region_bound: counts must be >= 1");
    return binom_sum(n1, n0);
}

BigCount layer_multiplier(Shape3 in_shape, Shape3 out_shape) {
    return binom_sum(out_shape.vol(), in_shape.vol());
}

static bool is_nonlinearity_feeder(const NetworkSpec& net, size_t i) {
    LayerKind k = net.layers[i].kind;
    bool carries_params = k == LayerKind::conv || k == LayerKind::conv_strided ||
                          k == LayerKind::conv_transpose || k == LayerKind::fully_connected;
    return carries_params && i + 1 < net.layers.size() &&
           net.layers[i + 1].kind == LayerKind::relu;
}

ConvRegionBound conv_region_bound(const NetworkSpec& net, Shape3 patch_input_shape,
                                  BoundMode mode) {
    NetworkSpec p = propagate_shapes(net, patch_input_shape);
    long long fixed_limit = patch_input_shape.vol();

    ConvRegionBound result;
    result.total = BigCount::one();
    for (size_t i = 0; i < p.layers.size(); ++i) {
        if (!is_nonlinearity_feeder(p, i)) continue;
        Shape3 before = shape_before(p, static_cast<int>(i));
        // The linearized walk folds any concat source into the input volume.
        long long in_vol = 1LL * input_channels_at(p, static_cast<int>(i)) * before.h * before.w;
        if (p.layers[i].kind == LayerKind::fully_connected)
            in_vol = p.layers[i].in_units;
        long long out_vol = p.shapes[i].vol();
        long long limit = mode == BoundMode::as_printed ? fixed_limit : in_vol;
        BoundFactor f{static_cast<int>(i), in_vol, out_vol, binom_sum(out_vol, limit)};
        result.total *= f.factor;
        result.factors.push_back(std::move(f));
    }
    return result;
}

FeasibilityResult feasible_region(const FeasibilityQuery& q) {
    if (q.classes < 2) throw std::invalid_argument("feasible_region: classes must be >= 2");
    FeasibilityResult r;

    if (q.bound) {
        const BigCount& bound = *q.bound;
        BigCount d(static_cast<unsigned long>(q.classes));
        if (!(d < bound)) return r;  // not even one pixel freely choosable
        // Start from the magnitude estimate, then settle the strict
        // inequality D^WH < bound exactly.
        long wh = static_cast<long>(std::floor(bound.log10() / std::log10(static_cast<double>(q.classes))));
        if (wh < 0) wh = 0;
        auto pw = [&](long e) { return BigCount::pow(q.classes, static_cast<unsigned long>(e)); };
        while (pw(wh + 1) < bound) ++wh;
        while (wh > 0 && !(pw(wh) < bound)) --wh;
        r.max_area = wh;
    } else if (q.log10_bound) {
        double ratio = *q.log10_bound / std::log10(static_cast<double>(q.classes));
        r.max_area = static_cast<long>(std::ceil(ratio)) - 1;
        if (r.max_area < 0) r.max_area = 0;
        r.warn_band = std::abs(ratio - std::round(ratio)) < 1e-9;
    } else {
        throw std::invalid_argument("feasible_region: query carries neither a value nor a magnitude");
    }

    r.max_side = static_cast<long>(std::floor(std::sqrt(static_cast<double>(r.max_area))));
    // floating sqrt can misround at perfect squares
    while ((r.max_side + 1) * (r.max_side + 1) <= r.max_area) ++r.max_side;
    while (r.max_side > 0 && r.max_side * r.max_side > r.max_area) --r.max_side;
    return r;
}

long count_regions_exact(const NetworkSpec& net, const FcParams& params,
                         const InputBox& domain, int resolution) {
    long input_dim = net.input.vol();
    if (input_dim > 2) throw std::invalid_argument("count_regions_exact: input dim must be <= 2");
    if (resolution < 2) throw std::invalid_argument("count_regions_exact: resolution must be >= 2");

    int relu_layers = 0;
    int total_units = 0;
    std::vector<int> fc_indices;
    for (size_t i = 0; i < net.layers.size(); ++i) {
        const LayerSpec& l = net.layers[i];
        if (l.kind == LayerKind::fully_connected) {
            if (l.out_units > 8)
                throw std::invalid_argument("count_regions_exact: at most 8 units per layer");
            fc_indices.push_back(static_cast<int>(i));
        } else if (l.kind == LayerKind::relu) {
            if (fc_indices.empty() || static_cast<size_t>(fc_indices.back()) + 1 != i)
                throw std::invalid_argument("count_regions_exact: relu must follow a fully connected layer");
            ++relu_layers;
            total_units += net.layers[fc_indices.back()].out_units;
        } else {
            throw std::invalid_argument("count_regions_exact: fully connected ReLU networks only");
        }
    }
    if (relu_layers > 3) throw std::invalid_argument("count_regions_exact: at most 3 ReLU layers");
    if (params.weights.size() != fc_indices.size() || params.biases.size() != fc_indices.size())
        throw std::invalid_argument("count_regions_exact: parameter count mismatch");
    if (total_units > 24) throw std::invalid_argument("count_regions_exact: too many ReLU units");

    auto pattern_at = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd v = x;
        uint64_t bits = 0;
        int bit = 0;
        size_t fc = 0;
        for (const LayerSpec& l : net.layers) {
            if (l.kind == LayerKind::fully_connected) {
                v = (params.weights[fc] * v + params.biases[fc]).eval();
                ++fc;
            } else {  // relu
                for (int u = 0; u < v.size(); ++u) {
                    if (v[u] > 0.0) bits |= (1ULL << bit);
                    ++bit;
                }
                v = v.cwiseMax(0.0);
            }
        }
        return bits;
    };

    std::unordered_set<uint64_t> patterns;
    Eigen::VectorXd x(input_dim);
    if (input_dim == 1) {
        for (int i = 0; i < resolution; ++i) {
            x[0] = domain.lo[0] + (domain.hi[0] - domain.lo[0]) * i / (resolution - 1);
            patterns.insert(pattern_at(x));
        }
    } else {
        for (int i = 0; i < resolution; ++i) {
            x[0] = domain.lo[0] + (domain.hi[0] - domain.lo[0]) * i / (resolution - 1);
            for (int j = 0; j < resolution; ++j) {
                x[1] = domain.lo[1] + (domain.hi[1] - domain.lo[1]) * j / (resolution - 1);
                patterns.insert(pattern_at(x));
            }
        }
    }
    return static_cast<long>(patterns.size());
}

FcParams random_fc_params(const NetworkSpec& net, unsigned long seed) {
    std::mt19937_64 gen(seed);
    auto uni = [&]() {
        // 53-bit mantissa draw, implementation-independent
        return ((gen() >> 11) * 0x1.0p-53) * 2.0 - 1.0;
    };
    FcParams p;
    for (const LayerSpec& l : net.layers) {
        if (l.kind != LayerKind::fully_connected) continue;
        Eigen::MatrixXd w(l.out_units, l.in_units);
        Eigen::VectorXd b(l.out_units);
        for (int r = 0; r < w.rows(); ++r)
            for (int c = 0; c < w.cols(); ++c) w(r, c) = uni();
        for (int r = 0; r < b.size(); ++r) b[r] = uni();
        p.weights.push_back(std::move(w));
        p.biases.push_back(std::move(b));
    }
    return p;
}

}  // namespace patchfeas
