#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "patchfeas/dataset.hpp"
#include "patchfeas/model.hpp"

namespace patchfeas {

struct TrainConfig {
    int epochs = 30;
    float lr = 0.01f;
    float momentum = 0.9f;
    int batch = 8;
    uint64_t seed = 0;
};

struct TrainResult {
    ModelParams params;
    std::vector<double> epoch_loss;  // mean training loss per epoch
    std::vector<double> val_acc;     // held-out pixel accuracy per epoch
};

// SGD with momentum on the softmax cross entropy, deterministic for a fixed
// seed. Throws NumericalError if the loss turns non-finite.
// `log` (optional) receives one line per epoch.
TrainResult train(const NetworkSpec& net, const std::vector<ShapesSample>& train_data,
                  const std::vector<ShapesSample>& val_data, const TrainConfig& cfg,
                  const std::function<void(const std::string&)>& log = {});

// Pixel accuracy of a model over a dataset.
double evaluate(const NetworkSpec& net, const ModelParams& params,
                const std::vector<ShapesSample>& data);

}  // namespace patchfeas
