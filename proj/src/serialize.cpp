#include "reducebench/serialize.hpp"

#include <fstream>

#include "reducebench/errors.hpp"

namespace reducebench {

namespace {

nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["data"] = m.data();
    return j;
}

Matrix matrix_from_json(const nlohmann::json& j) {
    const std::size_t rows = j.at("rows").get<std::size_t>();
    const std::size_t cols = j.at("cols").get<std::size_t>();
    const std::vector<double> data = j.at("data").get<std::vector<double>>();
    if (data.size() != rows * cols) {
        throw Error(ErrorCode::InvalidConfig, "matrix data length does not match rows*cols");
    }
    Matrix m(rows, cols);
    std::copy(data.begin(), data.end(), m.data().begin());
    return m;
}

nlohmann::json record_header(const char* kind) {
    nlohmann::json j;
    j["format_version"] = kModelFormatVersion;
    j["kind"] = kind;
    return j;
}

void check_header(const nlohmann::json& j, const char* kind) {
    if (!j.is_object() || j.value("format_version", -1) != kModelFormatVersion) {
        throw Error(ErrorCode::InvalidConfig, "unsupported model format version");
    }
    if (j.value("kind", std::string()) != kind) {
        throw Error(ErrorCode::InvalidConfig,
                    "expected model kind '" + std::string(kind) + "', found '" +
                        j.value("kind", std::string("<missing>")) + "'");
    }
}

nlohmann::json layer_to_json(const LayerParams& layer) {
    nlohmann::json j;
    j["weights"] = matrix_to_json(layer.weights);
    j["bias"] = layer.bias;
    j["activation"] = layer.activation == Activation::Sigmoid ? "sigmoid" : "identity";
    return j;
}

LayerParams layer_from_json(const nlohmann::json& j) {
    LayerParams layer;
    layer.weights = matrix_from_json(j.at("weights"));
    layer.bias = j.at("bias").get<std::vector<double>>();
    const std::string act = j.at("activation").get<std::string>();
    if (act == "sigmoid") {
        layer.activation = Activation::Sigmoid;
    } else if (act == "identity") {
        layer.activation = Activation::Identity;
    } else {
        throw Error(ErrorCode::InvalidConfig, "unknown activation '" + act + "'");
    }
    return layer;
}

} // namespace

nlohmann::json autoencoder_to_json(const AutoencoderModel& model) {
    nlohmann::json j = record_header("autoencoder");
    j["input_dim"] = model.input_dim;
    j["code_dim"] = model.code_dim;
    j["loss_trace"] = model.loss_trace;
    j["encoder_layers"] = nlohmann::json::array();
    for (const LayerParams& layer : model.encoder_layers) {
        j["encoder_layers"].push_back(layer_to_json(layer));
    }
    j["decoder_layers"] = nlohmann::json::array();
    for (const LayerParams& layer : model.decoder_layers) {
        j["decoder_layers"].push_back(layer_to_json(layer));
    }
    return j;
}

AutoencoderModel autoencoder_from_json(const nlohmann::json& j) {
    check_header(j, "autoencoder");
    AutoencoderModel model;
    model.input_dim = j.at("input_dim").get<std::size_t>();
    model.code_dim = j.at("code_dim").get<std::size_t>();
    model.loss_trace = j.at("loss_trace").get<std::vector<double>>();
    for (const nlohmann::json& layer : j.at("encoder_layers")) {
        model.encoder_layers.push_back(layer_from_json(layer));
    }
    for (const nlohmann::json& layer : j.at("decoder_layers")) {
        model.decoder_layers.push_back(layer_from_json(layer));
    }
    return model;
}

nlohmann::json nca_to_json(const NcaModel& model) {
    nlohmann::json j = record_header("nca");
    j["projection"] = matrix_to_json(model.A);
    j["objective_trace"] = model.objective_trace;
    j["converged"] = model.converged;
    return j;
}

NcaModel nca_from_json(const nlohmann::json& j) {
    check_header(j, "nca");
    NcaModel model;
    model.A = matrix_from_json(j.at("projection"));
    model.objective_trace = j.at("objective_trace").get<std::vector<double>>();
    model.converged = j.at("converged").get<bool>();
    return model;
}

nlohmann::json knn_to_json(const KnnModel& model) {
    nlohmann::json j = record_header("knn");
    j["k"] = model.k;
    j["train_features"] = matrix_to_json(model.train_features);
    j["train_labels"] = model.train_labels;
    j["class_count"] = model.class_count;
    return j;
}

KnnModel knn_from_json(const nlohmann::json& j) {
    check_header(j, "knn");
    KnnModel model;
    model.k = j.at("k").get<std::size_t>();
    model.train_features = matrix_from_json(j.at("train_features"));
    model.train_labels = j.at("train_labels").get<std::vector<int>>();
    model.class_count = j.at("class_count").get<std::size_t>();
    return model;
}

nlohmann::json enn_to_json(const EnnModel& model) {
    nlohmann::json j = record_header("enn");
    j["k"] = model.k;
    j["train_features"] = matrix_to_json(model.train_features);
    j["train_labels"] = model.train_labels;
    return j;
}

EnnModel enn_from_json(const nlohmann::json& j) {
    check_header(j, "enn");
    return fit_enn(matrix_from_json(j.at("train_features")),
                   j.at("train_labels").get<std::vector<int>>(), j.at("k").get<std::size_t>());
}

nlohmann::json svm_binary_to_json(const SvmBinaryModel& model) {
    nlohmann::json j = record_header("svm_binary");
    j["support_vectors"] = matrix_to_json(model.support_vectors);
    j["alphas"] = model.alphas;
    j["support_labels"] = model.support_labels;
    j["bias"] = model.bias;
    j["C"] = model.C;
    j["converged"] = model.converged;
    return j;
}

SvmBinaryModel svm_binary_from_json(const nlohmann::json& j) {
    check_header(j, "svm_binary");
    SvmBinaryModel model;
    model.support_vectors = matrix_from_json(j.at("support_vectors"));
    model.alphas = j.at("alphas").get<std::vector<double>>();
    model.support_labels = j.at("support_labels").get<std::vector<double>>();
    model.bias = j.at("bias").get<double>();
    model.C = j.at("C").get<double>();
    model.converged = j.at("converged").get<bool>();
    return model;
}

nlohmann::json svm_multiclass_to_json(const SvmMulticlassModel& model) {
    nlohmann::json j = record_header("svm_multiclass");
    j["class_count"] = model.class_count;
    j["pairs"] = nlohmann::json::array();
    for (const SvmMulticlassModel::PairwiseModel& pair : model.pairs) {
        nlohmann::json pj;
        pj["first"] = pair.first;
        pj["second"] = pair.second;
        pj["model"] = svm_binary_to_json(pair.model);
        j["pairs"].push_back(pj);
    }
    return j;
}

SvmMulticlassModel svm_multiclass_from_json(const nlohmann::json& j) {
    check_header(j, "svm_multiclass");
    SvmMulticlassModel model;
    model.class_count = j.at("class_count").get<std::size_t>();
    for (const nlohmann::json& pj : j.at("pairs")) {
        SvmMulticlassModel::PairwiseModel pair;
        pair.first = pj.at("first").get<int>();
        pair.second = pj.at("second").get<int>();
        pair.model = svm_binary_from_json(pj.at("model"));
        model.pairs.push_back(std::move(pair));
    }
    return model;
}

void write_json_file(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    }
    out << j.dump(2) << '\n';
    if (!out) {
        throw Error(ErrorCode::IoError, "failed writing '" + path + "'");
    }
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::FileNotFound, "cannot open '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::IoError, "invalid JSON in '" + path + "': " + e.what());
    }
    return j;
}

} // namespace reducebench
