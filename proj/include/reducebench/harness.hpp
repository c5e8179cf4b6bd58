#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reducebench/autoencoder.hpp"
#include "reducebench/dataset.hpp"
#include "reducebench/metrics.hpp"
#include "reducebench/nca.hpp"

namespace reducebench {

struct DatasetSpec {
    std::string name;
    std::string path;
    int label_column = -1; // -1 selects the last column
    std::string label_column_name;
    bool has_header = false;
};

/// Hyperparameters for one benchmark run. Seeds are not configurable per
/// algorithm: every seeded component of repetition r uses base_seed + r, so a
/// run is reproducible from base_seed alone.
struct RunConfig {
    int schema_version = 1;
    std::vector<DatasetSpec> datasets;
    std::vector<std::string> reducers;    // subset of {none, autoencoder, nca}
    std::vector<std::string> classifiers; // subset of {knn, enn, svm}
    std::size_t repetitions = 10;
    std::uint64_t base_seed = 0;
    double train_fraction = 0.9;
    bool stratified = true;
    std::string output_dir = "results";

    AeTrainConfig autoencoder; // seed field ignored; assigned per repetition
    NcaConfig nca;             // p and seed fields ignored; assigned per cell
    std::size_t knn_k = 5;
    std::size_t enn_k = 5;
    double svm_c = 1.0;
    double svm_tol = 1e-3;
};

/// Strict parse: unknown keys, unknown algorithm names, and out-of-range
/// values are rejected so config typos cannot silently change a run.
RunConfig parse_run_config(const nlohmann::json& j);
nlohmann::json run_config_to_json(const RunConfig& config);

/// Parses the file at path and additionally checks that every dataset loads.
RunConfig load_and_validate_config(const std::string& path);

struct PhaseTimings {
    double reduce_seconds = 0.0;
    double train_seconds = 0.0;
    double predict_seconds = 0.0;
};

struct CellResult {
    std::string dataset;
    std::string reducer;
    std::string classifier;
    std::size_t repetition = 0;
    std::uint64_t seed = 0; // base_seed + repetition
    std::size_t original_dim = 0;
    std::size_t reduced_dim = 0;
    MetricsReport metrics;
    PhaseTimings timings;
};

/// For every dataset and repetition: split 90:10, fit the scaler and each
/// reducer on the training rows only, reduce both partitions to
/// ceil(d/2) columns ("none" passes the scaled features through), then train
/// and score each classifier. Cells are independent and the result order is
/// fixed (dataset, repetition, reducer, classifier) regardless of the degree
/// of parallelism.
std::vector<CellResult> run_pipeline(const RunConfig& config);

/// Writes results.csv, summary.csv, report.json, accuracy_plotdata.csv and
/// timings.csv under out_dir. Everything except timings.csv is byte-stable
/// for a fixed config and base_seed.
void emit_reports(const std::vector<CellResult>& results, const RunConfig& config,
                  const std::string& out_dir);

/// ceil(d / 2), the reduced width both reducers must emit.
std::size_t reduced_dimension(std::size_t d);

} // namespace reducebench
