#pragma once

#include <cstdint>
#include <vector>

#include "reducebench/linalg.hpp"

namespace reducebench {

enum class Activation { Sigmoid, Identity };

struct LayerParams {
    Matrix weights;           // out_dim x in_dim
    std::vector<double> bias; // out_dim
    Activation activation = Activation::Sigmoid;

    std::size_t in_dim() const { return weights.cols(); }
    std::size_t out_dim() const { return weights.rows(); }
};

/// Symmetric feed-forward autoencoder. The encoder half is the reducer.
struct AutoencoderModel {
    std::vector<LayerParams> encoder_layers;
    std::vector<LayerParams> decoder_layers;
    std::size_t input_dim = 0;
    std::size_t code_dim = 0;
    std::vector<double> loss_trace; // mean per-sample reconstruction error after each epoch
};

struct AeTrainConfig {
    std::size_t epochs = 500;
    double learning_rate = 0.05;
    double momentum = 0.9; // classical momentum, in [0, 1)
    std::size_t batch_size = 16;
    std::uint64_t seed = 0;
    double init_scale = 0.1; // weights drawn uniformly from [-init_scale, +init_scale]
};

/// Apply the encoder layers: activation(W x + b) in order. Returns the code.
std::vector<double> encode(const AutoencoderModel& model, const std::vector<double>& x);

/// Apply the decoder layers to a code. Returns the reconstruction.
std::vector<double> decode(const AutoencoderModel& model, const std::vector<double>& code);

/// Sum over rows of ||decode(encode(x)) - x||^2.
double reconstruction_error(const AutoencoderModel& model, const Matrix& X);

/// reconstruction_error / row count, for reporting.
double reconstruction_error_mean(const AutoencoderModel& model, const Matrix& X);

/// Row-wise encode; the result has exactly code_dim columns.
Matrix reduce_with_autoencoder(const AutoencoderModel& model, const Matrix& X);

/// Train a d -> h -> m -> h -> d sigmoid autoencoder with h = ceil((d+m)/2)
/// by seeded mini-batch gradient descent with momentum on the summed squared
/// reconstruction error. Deterministic: weight init draws (per layer: weight
/// entries row-major, then bias) and the per-epoch sample shuffle all come
/// from one Rng seeded with config.seed. Throws InvalidCodeDim when m is not
/// in [1, d] and NonFiniteLoss when an epoch loss diverges.
AutoencoderModel train_autoencoder(const Matrix& X_train, std::size_t code_dim,
                                   const AeTrainConfig& config);

/// Full loss and parameter gradients over the given rows, layers ordered
/// encoder-then-decoder. Used by the trainer and by gradient-check tests.
struct AeGradients {
    std::vector<Matrix> weight_grads;
    std::vector<std::vector<double>> bias_grads;
    double loss = 0.0; // summed over rows
};
AeGradients autoencoder_loss_and_gradient(const AutoencoderModel& model, const Matrix& X);

} // namespace reducebench
