#include "patchfeas/train.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "patchfeas/rng.hpp"

namespace patchfeas {

double evaluate(const NetworkSpec& net, const ModelParams& params,
                const std::vector<ShapesSample>& data) {
    if (data.empty()) throw DataError("evaluate: empty dataset");
    Engine<float> eng(net, params);
    double acc = 0.0;
    for (const ShapesSample& s : data) {
        Tensor<float> logits = eng.forward(s.to_tensor());
        acc += pixel_accuracy(argmax_map(logits), s.labels);
    }
    return acc / static_cast<double>(data.size());
}

TrainResult train(const NetworkSpec& net, const std::vector<ShapesSample>& train_data,
                  const std::vector<ShapesSample>& val_data, const TrainConfig& cfg,
                  const std::function<void(const std::string&)>& log) {
    if (train_data.empty()) throw DataError("train: empty dataset");
    if (net.shapes.empty() || net.shapes.back().c != kNumClasses)
        throw SpecError("train: network must end in a " + std::to_string(kNumClasses) +
                        "-channel logit map");
    if (net.shapes.back().h != train_data[0].size || net.shapes.back().w != train_data[0].size)
        throw SpecError("train: output spatial dims must match the images");

    ModelParams params = init_params(net, cfg.seed);
    Engine<float> eng(net, params);

    // momentum buffers
    std::vector<std::vector<float>> vw, vb;
    for (size_t i = 0; i < params.weights.size(); ++i) {
        vw.emplace_back(params.weights[i].size(), 0.0f);
        vb.emplace_back(params.biases[i].size(), 0.0f);
    }

    Rng shuffle_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<int> order(train_data.size());
    std::iota(order.begin(), order.end(), 0);

    const long px = static_cast<long>(train_data[0].size) * train_data[0].size;
    std::vector<float> unit_weights(px, 1.0f);

    TrainResult result;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        // Fisher-Yates with the seeded stream
        for (int i = static_cast<int>(order.size()) - 1; i > 0; --i)
            std::swap(order[i], order[shuffle_rng.uniform_int(0, i)]);

        double epoch_loss = 0.0;
        for (size_t start = 0; start < order.size(); start += cfg.batch) {
            size_t end = std::min(order.size(), start + cfg.batch);
            eng.zero_grads();
            double batch_loss = 0.0;
            for (size_t k = start; k < end; ++k) {
                const ShapesSample& s = train_data[order[k]];
                Tensor<float> logits = eng.forward(s.to_tensor());
                LossResult<float> lr = softmax_ce_loss(logits, s.labels, unit_weights);
                if (!std::isfinite(lr.loss))
                    throw NumericalError("train: non-finite loss at epoch " +
                                         std::to_string(epoch) + ", sample " +
                                         std::to_string(order[k]));
                batch_loss += lr.loss;
                eng.backward(lr.dlogits, true);
            }
            float inv = 1.0f / static_cast<float>(end - start);
            for (size_t i = 0; i < vw.size(); ++i) {
                for (size_t j = 0; j < vw[i].size(); ++j) {
                    vw[i][j] = cfg.momentum * vw[i][j] - cfg.lr * eng.gw[i][j] * inv;
                    eng.weights()[i][j] += vw[i][j];
                }
                for (size_t j = 0; j < vb[i].size(); ++j) {
                    vb[i][j] = cfg.momentum * vb[i][j] - cfg.lr * eng.gb[i][j] * inv;
                    eng.bias_vecs()[i][j] += vb[i][j];
                }
            }
            epoch_loss += batch_loss;
        }
        epoch_loss /= static_cast<double>(order.size());
        result.epoch_loss.push_back(epoch_loss);

        // sync params for evaluation
        for (size_t i = 0; i < params.weights.size(); ++i) {
            params.weights[i].assign(eng.weights()[i].begin(), eng.weights()[i].end());
            params.biases[i].assign(eng.bias_vecs()[i].begin(), eng.bias_vecs()[i].end());
        }
        double acc = val_data.empty() ? 0.0 : evaluate(net, params, val_data);
        result.val_acc.push_back(acc);
        if (log) {
            std::ostringstream ss;
            ss << "epoch " << (epoch + 1) << "/" << cfg.epochs << " loss " << epoch_loss
               << " val_acc " << acc;
            log(ss.str());
        }
    }

    result.params = std::move(params);
    return result;
}

}  // namespace patchfeas
