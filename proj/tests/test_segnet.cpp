#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "patchfeas/dataset.hpp"
#include "patchfeas/model.hpp"
#include "patchfeas/ops.hpp"
#include "patchfeas/train.hpp"

using namespace patchfeas;

namespace {

constexpr double kEps = 1e-3;
constexpr double kRelTol = 1e-4;

double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

std::vector<double> randv(size_t n, std::mt19937_64& gen) {
    std::vector<double> v(n);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& x : v) x = u(gen);
    return v;
}

Tensor<double> rand_tensor(int n, int c, int h, int w, std::mt19937_64& gen) {
    Tensor<double> t(n, c, h, w);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& x : t.data) x = u(gen);
    return t;
}

double dot(const Tensor<double>& a, const Tensor<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) s += a.data[i] * b.data[i];
    return s;
}

// Central-difference check of df/dx for f(x) = <fwd(x), R>, where `analytic`
// is the backward pass evaluated with dy = R.
template <typename Fwd>
void check_input_grad(Tensor<double>& x, const Tensor<double>& R, const Tensor<double>& analytic,
                      Fwd fwd) {
    for (size_t i = 0; i < x.data.size(); ++i) {
        double keep = x.data[i];
        x.data[i] = keep + kEps;
        double up = dot(fwd(x), R);
        x.data[i] = keep - kEps;
        double dn = dot(fwd(x), R);
        x.data[i] = keep;
        double numeric = (up - dn) / (2 * kEps);
        CAPTURE(i);
        CHECK(rel_err(analytic.data[i], numeric) < kRelTol);
    }
}

void check_param_grad(std::vector<double>& w, const std::vector<double>& analytic,
                      const std::function<double()>& loss) {
    for (size_t i = 0; i < w.size(); ++i) {
        double keep = w[i];
        w[i] = keep + kEps;
        double up = loss();
        w[i] = keep - kEps;
        double dn = loss();
        w[i] = keep;
        double numeric = (up - dn) / (2 * kEps);
        CAPTURE(i);
        CHECK(rel_err(analytic[i], numeric) < kRelTol);
    }
}

}  // namespace

TEST_CASE("conv2d gradients (stride 1 and 2) pass finite differences") {
    std::mt19937_64 gen(21);
    for (int inst = 0; inst < 5; ++inst) {
        for (int stride : {1, 2}) {
            int cin = 1 + inst % 2, cout = 2, kh = 3, kw = 3;
            Tensor<double> x = rand_tensor(1, cin, 5, 6, gen);
            std::vector<double> w = randv(static_cast<size_t>(cout) * cin * kh * kw, gen);
            std::vector<double> b = randv(cout, gen);
            auto fwd = [&](const Tensor<double>& in) {
                return conv2d_fwd(in, w, b, cout, kh, kw, stride);
            };
            Tensor<double> y = fwd(x);
            Tensor<double> R = rand_tensor(y.n, y.c, y.h, y.w, gen);
            std::vector<double> dw(w.size(), 0.0), db(b.size(), 0.0);
            Tensor<double> dx = conv2d_bwd(x, R, w, cout, kh, kw, stride, &dw, &db, true);

            check_input_grad(x, R, dx, fwd);
            auto loss = [&]() { return dot(fwd(x), R); };
            check_param_grad(w, dw, loss);
            check_param_grad(b, db, loss);
        }
    }
}

TEST_CASE("conv_transpose gradients pass finite differences") {
    std::mt19937_64 gen(22);
    for (int inst = 0; inst < 5; ++inst) {
        int cin = 2, cout = 1 + inst % 2, kh = 3, kw = 3, stride = 2;
        Tensor<double> x = rand_tensor(1, cin, 3, 4, gen);
        std::vector<double> w = randv(static_cast<size_t>(cin) * cout * kh * kw, gen);
        std::vector<double> b = randv(cout, gen);
        auto fwd = [&](const Tensor<double>& in) {
            return conv_transpose_fwd(in, w, b, cout, kh, kw, stride);
        };
        Tensor<double> y = fwd(x);
        Tensor<double> R = rand_tensor(y.n, y.c, y.h, y.w, gen);
        std::vector<double> dw(w.size(), 0.0), db(b.size(), 0.0);
        Tensor<double> dx = conv_transpose_bwd(x, R, w, cout, kh, kw, stride, &dw, &db, true);

        check_input_grad(x, R, dx, fwd);
        auto loss = [&]() { return dot(fwd(x), R); };
        check_param_grad(w, dw, loss);
        check_param_grad(b, db, loss);
    }
}

TEST_CASE("relu and avgpool gradients pass finite differences") {
    std::mt19937_64 gen(23);
    for (int inst = 0; inst < 5; ++inst) {
        Tensor<double> x = rand_tensor(1, 2, 5, 5, gen);
        // keep values away from the relu kink so central differences are valid
        for (auto& v : x.data)
            if (std::abs(v) < 0.05) v = 0.1;

        Tensor<double> R = rand_tensor(1, 2, 5, 5, gen);
        check_input_grad(x, R, relu_bwd(x, R), [](const Tensor<double>& in) { return relu_fwd(in); });
        check_input_grad(x, R, avgpool3x3_bwd(x, R),
                         [](const Tensor<double>& in) { return avgpool3x3_fwd(in); });
    }
}

TEST_CASE("softmax cross entropy gradient passes finite differences") {
    std::mt19937_64 gen(24);
    for (int inst = 0; inst < 5; ++inst) {
        Tensor<double> logits = rand_tensor(1, 4, 3, 3, gen);
        std::vector<uint8_t> target(9);
        std::vector<double> weights(9);
        for (auto& t : target) t = static_cast<uint8_t>(gen() % 4);
        for (auto& w : weights) w = 0.25 + (gen() % 100) / 100.0;
        LossResult<double> lr = softmax_ce_loss(logits, target, weights);
        for (size_t i = 0; i < logits.data.size(); ++i) {
            double keep = logits.data[i];
            logits.data[i] = keep + kEps;
            double up = softmax_ce_loss(logits, target, weights).loss;
            logits.data[i] = keep - kEps;
            double dn = softmax_ce_loss(logits, target, weights).loss;
            logits.data[i] = keep;
            CHECK(rel_err(lr.dlogits.data[i], (up - dn) / (2 * kEps)) < kRelTol);
        }
    }
}

TEST_CASE("convolution adjointness: <conv(x), y> == <x, conv_bwd(y)>") {
    std::mt19937_64 gen(25);
    for (int stride : {1, 2}) {
        int cin = 3, cout = 4, kh = 3, kw = 3;
        Tensor<double> x = rand_tensor(1, cin, 7, 9, gen);
        std::vector<double> w = randv(static_cast<size_t>(cout) * cin * kh * kw, gen);
        std::vector<double> zero_b(cout, 0.0);
        Tensor<double> y = conv2d_fwd(x, w, zero_b, cout, kh, kw, stride);
        Tensor<double> r = rand_tensor(y.n, y.c, y.h, y.w, gen);
        Tensor<double> back = conv2d_bwd<double>(x, r, w, cout, kh, kw, stride, nullptr, nullptr, true);
        double lhs = dot(y, r);
        double rhs = dot(x, back);
        CHECK(std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)) < 1e-10);
    }
}

TEST_CASE("transposed convolution adjointness") {
    std::mt19937_64 gen(26);
    int cin = 3, cout = 2, kh = 3, kw = 3, stride = 2;
    Tensor<double> x = rand_tensor(1, cin, 4, 5, gen);
    std::vector<double> w = randv(static_cast<size_t>(cin) * cout * kh * kw, gen);
    std::vector<double> zero_b(cout, 0.0);
    Tensor<double> y = conv_transpose_fwd(x, w, zero_b, cout, kh, kw, stride);
    Tensor<double> r = rand_tensor(y.n, y.c, y.h, y.w, gen);
    Tensor<double> back = conv_transpose_bwd<double>(x, r, w, cout, kh, kw, stride, nullptr, nullptr, true);
    double lhs = dot(y, r);
    double rhs = dot(x, back);
    CHECK(std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)) < 1e-10);
}

TEST_CASE("identity kernel convolution reproduces the input") {
    Tensor<double> x(1, 1, 4, 4);
    for (size_t i = 0; i < x.data.size(); ++i) x.data[i] = static_cast<double>(i) * 0.13 - 1.0;
    std::vector<double> w(9, 0.0);
    w[4] = 1.0;  // center tap
    std::vector<double> b(1, 0.0);
    Tensor<double> y = conv2d_fwd(x, w, b, 1, 3, 3, 1);
    for (size_t i = 0; i < x.data.size(); ++i) CHECK(y.data[i] == doctest::Approx(x.data[i]));
}

TEST_CASE("relu on all-negative input: zeros forward, zero gradient back") {
    Tensor<double> x(1, 1, 3, 3);
    for (auto& v : x.data) v = -0.5;
    Tensor<double> y = relu_fwd(x);
    for (double v : y.data) CHECK(v == 0.0);
    Tensor<double> dy(1, 1, 3, 3);
    for (auto& v : dy.data) v = 1.0;
    Tensor<double> dx = relu_bwd(x, dy);
    for (double v : dx.data) CHECK(v == 0.0);
}

TEST_CASE("loss oracle values") {
    Tensor<double> flat(1, 4, 2, 2);
    std::vector<uint8_t> target(4, 2);
    std::vector<double> ones(4, 1.0);
    CHECK(softmax_ce_loss(flat, target, ones).loss == doctest::Approx(std::log(4.0)));

    Tensor<double> sharp(1, 4, 1, 1);
    sharp.data = {0.0, 0.0, 50.0, 0.0};
    std::vector<uint8_t> hit(1, 2);
    std::vector<double> one(1, 1.0);
    CHECK(softmax_ce_loss(sharp, hit, one).loss < 1e-12);

    // independent scalar evaluation on a random 2x2x4 map
    std::mt19937_64 gen(31);
    Tensor<double> logits = rand_tensor(1, 4, 2, 2, gen);
    std::vector<uint8_t> t = {0, 3, 1, 2};
    std::vector<double> w = {1.0, 2.0, 0.5, 1.5};
    double expect = 0.0, wsum = 0.0;
    for (int p = 0; p < 4; ++p) {
        long double denom = 0.0;
        for (int k = 0; k < 4; ++k) denom += std::exp(static_cast<long double>(logits.data[k * 4 + p]));
        expect += w[p] * static_cast<double>(-std::log(
                             std::exp(static_cast<long double>(logits.data[t[p] * 4 + p])) / denom));
        wsum += w[p];
    }
    expect /= wsum;
    CHECK(softmax_ce_loss(logits, t, w).loss == doctest::Approx(expect).epsilon(1e-10));

    CHECK_THROWS_AS(softmax_ce_loss(flat, std::vector<uint8_t>{9, 0, 0, 0}, ones), DataError);
}

TEST_CASE("softmax channels sum to one at every pixel") {
    std::mt19937_64 gen(32);
    Tensor<double> logits = rand_tensor(2, 5, 4, 4, gen);
    Tensor<double> p = softmax_channels(logits);
    for (int s = 0; s < 2; ++s)
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 4; ++x) {
                double sum = 0.0;
                for (int k = 0; k < 5; ++k) sum += p.at(s, k, y, x);
                CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
            }
}

TEST_CASE("dataset generation is deterministic and labeled consistently") {
    auto a = gen_shapes_dataset(8, 48, 77);
    auto b = gen_shapes_dataset(8, 48, 77);
    REQUIRE(a.size() == 8);
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].image == b[i].image);
        CHECK(a[i].labels == b[i].labels);
    }
    CHECK(gen_shapes_dataset(0, 48, 1).empty());
    for (const ShapesSample& s : a) {
        for (float v : s.image) {
            CHECK(v >= 0.0f);
            CHECK(v <= 1.0f);
        }
        for (uint8_t l : s.labels) CHECK(l < kNumClasses);
    }
    // different seeds differ
    auto c = gen_shapes_dataset(1, 48, 78);
    CHECK(c[0].image != a[0].image);
}

TEST_CASE("dataset disk round trip preserves the 8-bit quantization") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "patchfeas_ds_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto samples = gen_shapes_dataset(3, 40, 5);
    write_dataset(dir.string(), samples, 40, 5);
    auto loaded = load_dataset(dir.string());
    REQUIRE(loaded.size() == 3);
    for (size_t i = 0; i < samples.size(); ++i) {
        CHECK(loaded[i].labels == samples[i].labels);
        RgbImage q = to_rgb8(samples[i].image, 40, 40);
        CHECK(loaded[i].image == from_rgb8(q));
    }
    fs::remove_all(dir);
}

TEST_CASE("model file round trip is bit exact") {
    namespace fs = std::filesystem;
    NetworkSpec net = parse_spec_file("specs/unet_toy.json");
    net = propagate_shapes(net, net.input);
    ModelParams p = init_params(net, 9001);
    fs::path path = fs::temp_directory_path() / "patchfeas_model_test.bin";
    save_model(path.string(), net, p);
    LoadedModel m = load_model(path.string());
    CHECK(m.spec == net);
    CHECK(m.spec.shapes_ready());
    CHECK(m.params == p);
    CHECK(serialize_model(net, p) == serialize_model(m.spec, m.params));
    fs::remove(path.string());
}

TEST_CASE("training with lr 0 is a no-op; seeded training is bit-reproducible") {
    NetworkSpec net = parse_spec_file("specs/unet_toy.json");
    net = propagate_shapes(net, net.input);
    auto data = gen_shapes_dataset(8, 64, 3);

    TrainConfig cfg;
    cfg.epochs = 1;
    cfg.lr = 0.0f;
    cfg.seed = 11;
    TrainResult frozen = train(net, data, {}, cfg);
    CHECK(frozen.params == init_params(net, 11));

    cfg.lr = 0.01f;
    cfg.epochs = 2;
    TrainResult r1 = train(net, data, data, cfg);
    TrainResult r2 = train(net, data, data, cfg);
    CHECK(r1.params == r2.params);
    CHECK(r1.epoch_loss == r2.epoch_loss);
    CHECK(r1.val_acc == r2.val_acc);
    CHECK(r1.epoch_loss[1] < r1.epoch_loss[0]);
}
