#include "reducebench/autoencoder.hpp"

#include <cmath>
#include <numeric>

#include "reducebench/rng.hpp"

namespace reducebench {

namespace {

double apply_activation(Activation a, double z) {
    return a == Activation::Sigmoid ? 1.0 / (1.0 + std::exp(-z)) : z;
}

// Derivative expressed through the activated value.
double activation_slope(Activation a, double activated) {
    return a == Activation::Sigmoid ? activated * (1.0 - activated) : 1.0;
}

std::vector<double> apply_layer(const LayerParams& layer, const std::vector<double>& x) {
    std::vector<double> out(layer.out_dim());
    for (std::size_t o = 0; o < layer.out_dim(); ++o) {
        const double* w = layer.weights.row(o);
        double z = layer.bias[o];
        for (std::size_t i = 0; i < x.size(); ++i) z += w[i] * x[i];
        out[o] = apply_activation(layer.activation, z);
    }
    return out;
}

// Batch forward through one layer: activations in, activations out.
Matrix forward_layer(const LayerParams& layer, const Matrix& input) {
    Matrix z = matmul_nt(input, layer.weights); // batch x out
    for (std::size_t i = 0; i < z.rows(); ++i)
        for (std::size_t o = 0; o < z.cols(); ++o)
            z(i, o) = apply_activation(layer.activation, z(i, o) + layer.bias[o]);
    return z;
}

std::vector<const LayerParams*> all_layers(const AutoencoderModel& model) {
    std::vector<const LayerParams*> layers;
    for (const auto& l : model.encoder_layers) layers.push_back(&l);
    for (const auto& l : model.decoder_layers) layers.push_back(&l);
    return layers;
}

Matrix forward_all(const AutoencoderModel& model, const Matrix& X) {
    Matrix a = X;
    for (const LayerParams* layer : all_layers(model)) a = forward_layer(*layer, a);
    return a;
}

double sum_squared_diff(const Matrix& a, const Matrix& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        s += squared_distance(a.row(i), b.row(i), a.cols());
    return s;
}

} // namespace

std::vector<double> encode(const AutoencoderModel& model, const std::vector<double>& x) {
    if (x.size() != model.input_dim)
        throw Error(ErrorCode::DimensionMismatch,
                    "encode expects length " + std::to_string(model.input_dim) + ", got " +
                        std::to_string(x.size()));
    std::vector<double> a = x;
    for (const auto& layer : model.encoder_layers) a = apply_layer(layer, a);
    return a;
}

std::vector<double> decode(const AutoencoderModel& model, const std::vector<double>& code) {
    if (code.size() != model.code_dim)
        throw Error(ErrorCode::DimensionMismatch,
                    "decode expects length " + std::to_string(model.code_dim) + ", got " +
                        std::to_string(code.size()));
    std::vector<double> a = code;
    for (const auto& layer : model.decoder_layers) a = apply_layer(layer, a);
    return a;
}

double reconstruction_error(const AutoencoderModel& model, const Matrix& X) {
    if (X.cols() != model.input_dim)
        throw Error(ErrorCode::DimensionMismatch,
                    "expected " + std::to_string(model.input_dim) + " columns, got " +
                        std::to_string(X.cols()));
    if (X.rows() == 0) return 0.0;
    return sum_squared_diff(forward_all(model, X), X);
}

double reconstruction_error_mean(const AutoencoderModel& model, const Matrix& X) {
    if (X.rows() == 0) return 0.0;
    return reconstruction_error(model, X) / static_cast<double>(X.rows());
}

Matrix reduce_with_autoencoder(const AutoencoderModel& model, const Matrix& X) {
    if (X.cols() != model.input_dim)
        throw Error(ErrorCode::DimensionMismatch,
                    "expected " + std::to_string(model.input_dim) + " columns, got " +
                        std::to_string(X.cols()));
    if (X.rows() == 0) return Matrix(0, model.code_dim);
    Matrix a = X;
    for (const auto& layer : model.encoder_layers) a = forward_layer(layer, a);
    return a;
}

AeGradients autoencoder_loss_and_gradient(const AutoencoderModel& model, const Matrix& X) {
    const std::vector<const LayerParams*> layers = all_layers(model);
    const std::size_t L = layers.size();

    // Forward pass, keeping every activation.
    std::vector<Matrix> acts(L + 1);
    acts[0] = X;
    for (std::size_t l = 0; l < L; ++l) acts[l + 1] = forward_layer(*layers[l], acts[l]);

    AeGradients grads;
    grads.weight_grads.resize(L);
    grads.bias_grads.resize(L);
    grads.loss = sum_squared_diff(acts[L], X);

    // delta = dLoss/dZ of the current layer, starting from d||x_hat - x||^2.
    Matrix delta(X.rows(), X.cols());
    for (std::size_t i = 0; i < X.rows(); ++i)
        for (std::size_t j = 0; j < X.cols(); ++j)
            delta(i, j) = 2.0 * (acts[L](i, j) - X(i, j)) *
                          activation_slope(layers[L - 1]->activation, acts[L](i, j));

    for (std::size_t l = L; l-- > 0;) {
        grads.weight_grads[l] = matmul_tn(delta, acts[l]); // out x in
        grads.bias_grads[l] = column_sums(delta);
        if (l == 0) break;
        Matrix prev = matmul_nn(delta, layers[l]->weights); // batch x in
        for (std::size_t i = 0; i < prev.rows(); ++i)
            for (std::size_t j = 0; j < prev.cols(); ++j)
                prev(i, j) *= activation_slope(layers[l - 1]->activation, acts[l](i, j));
        delta = std::move(prev);
    }
    return grads;
}

AutoencoderModel train_autoencoder(const Matrix& X_train, std::size_t code_dim,
                                   const AeTrainConfig& config) {
    const std::size_t n = X_train.rows();
    const std::size_t d = X_train.cols();
    if (code_dim < 1 || code_dim > d)
        throw Error(ErrorCode::InvalidCodeDim,
                    "code_dim " + std::to_string(code_dim) + " not in [1, " + std::to_string(d) + "]");
    if (n < 2)
        throw Error(ErrorCode::DegenerateInput, "training needs at least 2 rows");

    const std::size_t h = (d + code_dim + 1) / 2; // ceil((d + m) / 2)
    Rng rng(config.seed);

    auto make_layer = [&](std::size_t in, std::size_t out) {
        LayerParams layer;
        layer.weights = Matrix(out, in);
        for (double& w : layer.weights.data()) w = rng.real(-config.init_scale, config.init_scale);
        layer.bias.resize(out);
        for (double& b : layer.bias) b = rng.real(-config.init_scale, config.init_scale);
        layer.activation = Activation::Sigmoid;
        return layer;
    };

    AutoencoderModel model;
    model.input_dim = d;
    model.code_dim = code_dim;
    model.encoder_layers.push_back(make_layer(d, h));
    model.encoder_layers.push_back(make_layer(h, code_dim));
    model.decoder_layers.push_back(make_layer(code_dim, h));
    model.decoder_layers.push_back(make_layer(h, d));

    std::vector<LayerParams*> layers;
    for (auto& l : model.encoder_layers) layers.push_back(&l);
    for (auto& l : model.decoder_layers) layers.push_back(&l);

    std::vector<Matrix> weight_vel(layers.size());
    std::vector<std::vector<double>> bias_vel(layers.size());
    for (std::size_t l = 0; l < layers.size(); ++l) {
        weight_vel[l] = Matrix(layers[l]->out_dim(), layers[l]->in_dim());
        bias_vel[l].assign(layers[l]->out_dim(), 0.0);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    model.loss_trace.reserve(config.epochs);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < n; start += config.batch_size) {
            const std::size_t stop = std::min(n, start + config.batch_size);
            const std::vector<std::size_t> batch_rows(order.begin() + static_cast<std::ptrdiff_t>(start),
                                                      order.begin() + static_cast<std::ptrdiff_t>(stop));
            const Matrix batch = X_train.take_rows(batch_rows);
            const AeGradients grads = autoencoder_loss_and_gradient(model, batch);

            const double scale = config.learning_rate;
            for (std::size_t l = 0; l < layers.size(); ++l) {
                auto& w = layers[l]->weights.data();
                auto& wv = weight_vel[l].data();
                const auto& wg = grads.weight_grads[l].data();
                for (std::size_t t = 0; t < w.size(); ++t) {
                    wv[t] = config.momentum * wv[t] - scale * wg[t];
                    w[t] += wv[t];
                }
                auto& b = layers[l]->bias;
                auto& bv = bias_vel[l];
                const auto& bg = grads.bias_grads[l];
                for (std::size_t t = 0; t < b.size(); ++t) {
                    bv[t] = config.momentum * bv[t] - scale * bg[t];
                    b[t] += bv[t];
                }
            }
        }
        const double epoch_loss = reconstruction_error_mean(model, X_train);
        if (!std::isfinite(epoch_loss))
            throw Error(ErrorCode::NonFiniteLoss,
                        "epoch " + std::to_string(epoch + 1) + "; reduce the learning rate");
        model.loss_trace.push_back(epoch_loss);
    }
    return model;
}

} // namespace reducebench
