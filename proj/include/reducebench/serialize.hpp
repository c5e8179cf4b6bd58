#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "reducebench/autoencoder.hpp"
#include "reducebench/enn.hpp"
#include "reducebench/knn.hpp"
#include "reducebench/nca.hpp"
#include "reducebench/svm.hpp"

namespace reducebench {

/// Versioned JSON records for trained models. Every record carries
/// {"format_version": 1, "kind": "<model kind>"}; loaders reject other
/// versions and kinds. Doubles survive a save/load round trip bit-exactly.
inline constexpr int kModelFormatVersion = 1;

nlohmann::json autoencoder_to_json(const AutoencoderModel& model);
AutoencoderModel autoencoder_from_json(const nlohmann::json& j);

nlohmann::json nca_to_json(const NcaModel& model);
NcaModel nca_from_json(const nlohmann::json& j);

nlohmann::json knn_to_json(const KnnModel& model);
KnnModel knn_from_json(const nlohmann::json& j);

/// ENN records store the training inputs; the neighbor caches are rebuilt
/// deterministically on load.
nlohmann::json enn_to_json(const EnnModel& model);
EnnModel enn_from_json(const nlohmann::json& j);

nlohmann::json svm_binary_to_json(const SvmBinaryModel& model);
SvmBinaryModel svm_binary_from_json(const nlohmann::json& j);

nlohmann::json svm_multiclass_to_json(const SvmMulticlassModel& model);
SvmMulticlassModel svm_multiclass_from_json(const nlohmann::json& j);

void write_json_file(const nlohmann::json& j, const std::string& path);
nlohmann::json read_json_file(const std::string& path);

} // namespace reducebench
