#include "reducebench/cli.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "reducebench/enn.hpp"
#include "reducebench/errors.hpp"
#include "reducebench/harness.hpp"
#include "reducebench/knn.hpp"
#include "reducebench/serialize.hpp"
#include "reducebench/svm.hpp"

namespace reducebench {

namespace {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_labeled_csv(const std::string& path, const Matrix& X,
                       const std::vector<std::string>& labels) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    }
    for (std::size_t c = 0; c < X.cols(); ++c) out << 'f' << c << ',';
    out << "label\n";
    for (std::size_t r = 0; r < X.rows(); ++r) {
        for (std::size_t c = 0; c < X.cols(); ++c) out << format_double(X(r, c)) << ',';
        out << labels[r] << '\n';
    }
    if (!out) {
        throw Error(ErrorCode::IoError, "failed writing '" + path + "'");
    }
}

CsvSchema schema_for(const DatasetSpec& spec) {
    CsvSchema schema;
    schema.label_column = spec.label_column;
    schema.label_column_name = spec.label_column_name;
    schema.has_header = spec.has_header;
    return schema;
}

int cmd_run(const std::string& config_path, const std::string& out_override,
            bool seed_given, std::uint64_t seed, bool reps_given, std::size_t repetitions) {
    RunConfig config = parse_run_config(read_json_file(config_path));
    if (seed_given) config.base_seed = seed;
    if (reps_given) config.repetitions = repetitions;
    if (!out_override.empty()) config.output_dir = out_override;

    const std::vector<CellResult> results = run_pipeline(config);
    emit_reports(results, config, config.output_dir);
    std::cout << results.size() << " cells -> " << config.output_dir << "/{results.csv, "
              << "summary.csv, report.json, accuracy_plotdata.csv, timings.csv}\n";
    return 0;
}

int cmd_validate(const std::string& config_path) {
    const RunConfig config = load_and_validate_config(config_path);
    std::cout << "config OK: " << config.datasets.size() << " dataset(s), "
              << config.reducers.size() << " reducer(s), " << config.classifiers.size()
              << " classifier(s), " << config.repetitions << " repetition(s)\n";
    return 0;
}

int cmd_reduce(const std::string& config_path, const std::string& reducer,
               const std::string& out_override, bool save_models) {
    RunConfig config = parse_run_config(read_json_file(config_path));
    const std::string out_dir = out_override.empty() ? config.output_dir : out_override;
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);

    for (const DatasetSpec& spec : config.datasets) {
        Dataset dataset;
        try {
            dataset = load_csv(spec.path, schema_for(spec), spec.name);
        } catch (const Error& e) {
            throw Error(e.code(), "dataset '" + spec.name + "': " + e.what());
        }
        SplitSpec split_spec;
        split_spec.train_fraction = config.train_fraction;
        split_spec.seed = config.base_seed;
        split_spec.stratified = config.stratified;
        const SplitIndices split = stratified_split(dataset, split_spec);
        const Matrix train_raw = dataset.features.take_rows(split.train);
        const Matrix test_raw = dataset.features.take_rows(split.test);
        const ScalerParams scaler = fit_scaler(train_raw);
        const Matrix train_scaled = apply_scaler(scaler, train_raw);
        const Matrix test_scaled = apply_scaler(scaler, test_raw);
        std::vector<int> train_labels(split.train.size());
        for (std::size_t i = 0; i < split.train.size(); ++i) {
            train_labels[i] = dataset.labels[split.train[i]];
        }

        const std::size_t target_dim = reduced_dimension(dataset.dim());
        Matrix train_reduced;
        Matrix test_reduced;
        if (reducer == "none") {
            train_reduced = train_scaled;
            test_reduced = test_scaled;
        } else if (reducer == "autoencoder") {
            AeTrainConfig ae = config.autoencoder;
            ae.seed = config.base_seed;
            const AutoencoderModel model = train_autoencoder(train_scaled, target_dim, ae);
            train_reduced = reduce_with_autoencoder(model, train_scaled);
            test_reduced = reduce_with_autoencoder(model, test_scaled);
            if (save_models) {
                write_json_file(autoencoder_to_json(model),
                                (dir / (spec.name + "_autoencoder_model.json")).string());
            }
        } else {
            NcaConfig nc = config.nca;
            nc.p = target_dim;
            nc.seed = config.base_seed;
            const NcaModel model = fit_nca(train_scaled, train_labels, nc);
            train_reduced = transform(model, train_scaled);
            test_reduced = transform(model, test_scaled);
            if (save_models) {
                write_json_file(nca_to_json(model),
                                (dir / (spec.name + "_nca_model.json")).string());
            }
        }

        const std::vector<std::string> all_labels = dataset.decode_labels();
        std::vector<std::string> train_names(split.train.size());
        std::vector<std::string> test_names(split.test.size());
        for (std::size_t i = 0; i < split.train.size(); ++i) {
            train_names[i] = all_labels[split.train[i]];
        }
        for (std::size_t i = 0; i < split.test.size(); ++i) {
            test_names[i] = all_labels[split.test[i]];
        }
        const std::string train_path = (dir / (spec.name + "_" + reducer + "_train.csv")).string();
        const std::string test_path = (dir / (spec.name + "_" + reducer + "_test.csv")).string();
        write_labeled_csv(train_path, train_reduced, train_names);
        write_labeled_csv(test_path, test_reduced, test_names);
        std::cout << spec.name << ": " << train_reduced.rows() << " train + "
                  << test_reduced.rows() << " test rows, " << train_reduced.cols()
                  << " columns -> " << train_path << ", " << test_path << '\n';
    }
    return 0;
}

int cmd_evaluate(const std::string& train_path, const std::string& test_path,
                 const std::vector<std::string>& classifiers, std::size_t knn_k,
                 std::size_t enn_k, double svm_c, double svm_tol,
                 const std::string& json_path) {
    CsvSchema schema;
    schema.has_header = true;
    const Dataset train = load_csv(train_path, schema, "train");
    const Dataset test_file = load_csv(test_path, schema, "test");
    if (test_file.dim() != train.dim()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "train has " + std::to_string(train.dim()) + " features, test has " +
                        std::to_string(test_file.dim()));
    }
    // Align test labels to the training encoding.
    std::vector<int> test_labels(test_file.size());
    const std::vector<std::string> test_names = test_file.decode_labels();
    for (std::size_t i = 0; i < test_names.size(); ++i) {
        const auto it =
            std::find(train.class_names.begin(), train.class_names.end(), test_names[i]);
        if (it == train.class_names.end()) {
            throw Error(ErrorCode::LabelOutOfRange,
                        "test label '" + test_names[i] + "' does not appear in the training set");
        }
        test_labels[i] = static_cast<int>(it - train.class_names.begin());
    }

    nlohmann::json out_json;
    out_json["train"] = train_path;
    out_json["test"] = test_path;
    out_json["results"] = nlohmann::json::array();
    for (const std::string& classifier : classifiers) {
        std::vector<int> predictions;
        if (classifier == "knn") {
            predictions = knn_predict_batch(fit_knn(train.features, train.labels, knn_k),
                                            test_file.features);
        } else if (classifier == "enn") {
            predictions = enn_predict_batch(fit_enn(train.features, train.labels, enn_k),
                                            test_file.features);
        } else if (classifier == "svm") {
            predictions = svm_predict_batch(
                svm_train_multiclass(train.features, train.labels, svm_c, svm_tol),
                test_file.features);
        } else {
            throw Error(ErrorCode::InvalidConfig, "unknown classifier '" + classifier + "'");
        }
        const MetricsReport report =
            evaluate_predictions(confusion(test_labels, predictions, train.class_count()));
        std::cout << classifier << ": accuracy=" << format_double(report.accuracy)
                  << " f_measure=" << format_double(report.f_measure)
                  << " g_mean=" << format_double(report.g_mean) << '\n';
        nlohmann::json r;
        r["classifier"] = classifier;
        r["accuracy"] = report.accuracy;
        r["f_measure"] = report.f_measure;
        r["g_mean"] = report.g_mean;
        r["per_class_precision"] = report.per_class_precision;
        r["per_class_recall"] = report.per_class_recall;
        out_json["results"].push_back(std::move(r));
    }
    if (!json_path.empty()) {
        write_json_file(out_json, json_path);
    }
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Dimensionality-reduction benchmark: autoencoder and NCA reducers, "
                 "KNN/ENN/SVM classifiers, seeded 90:10 evaluation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::size_t repetitions = 0;
    std::string reducer;
    bool save_models = false;
    std::string train_path;
    std::string test_path;
    std::vector<std::string> classifiers = {"knn", "enn", "svm"};
    std::size_t knn_k = 5;
    std::size_t enn_k = 5;
    double svm_c = 1.0;
    double svm_tol = 1e-3;
    std::string json_path;

    CLI::App* run = app.add_subcommand("run", "Execute the full benchmark pipeline");
    run->add_option("--config", config_path, "Run config JSON")->required();
    run->add_option("--out", out_dir, "Output directory (overrides the config)");
    CLI::Option* seed_opt = run->add_option("--seed", seed, "Base seed (overrides the config)");
    CLI::Option* reps_opt =
        run->add_option("--repetitions", repetitions, "Repetition count (overrides the config)");

    CLI::App* reduce = app.add_subcommand("reduce", "Write reduced train/test CSVs per dataset");
    reduce->add_option("--config", config_path, "Run config JSON")->required();
    reduce->add_option("--reducer", reducer, "Reducer to apply")
        ->required()
        ->check(CLI::IsMember({"none", "autoencoder", "nca"}));
    reduce->add_option("--out", out_dir, "Output directory (overrides the config)");
    reduce->add_flag("--save-models", save_models, "Also write the fitted reducer models");

    CLI::App* evaluate = app.add_subcommand("evaluate", "Score pre-reduced train/test CSVs");
    evaluate->add_option("--train", train_path, "Training CSV (header, label last)")->required();
    evaluate->add_option("--test", test_path, "Test CSV (header, label last)")->required();
    evaluate->add_option("--classifiers", classifiers, "Classifiers to score")
        ->delimiter(',')
        ->check(CLI::IsMember({"knn", "enn", "svm"}));
    evaluate->add_option("--knn-k", knn_k, "KNN neighbor count");
    evaluate->add_option("--enn-k", enn_k, "ENN neighbor count");
    evaluate->add_option("--svm-c", svm_c, "SVM soft-margin C");
    evaluate->add_option("--svm-tol", svm_tol, "SVM solver tolerance");
    evaluate->add_option("--json", json_path, "Also write metrics to this JSON file");

    CLI::App* validate =
        app.add_subcommand("validate-config", "Check a config and its dataset files");
    validate->add_option("--config", config_path, "Run config JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) {
            return cmd_run(config_path, out_dir, seed_opt->count() > 0, seed,
                           reps_opt->count() > 0, repetitions);
        }
        if (reduce->parsed()) {
            return cmd_reduce(config_path, reducer, out_dir, save_models);
        }
        if (evaluate->parsed()) {
            return cmd_evaluate(train_path, test_path, classifiers, knn_k, enn_k, svm_c, svm_tol,
                                json_path);
        }
        return cmd_validate(config_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: Internal: " << e.what() << '\n';
        return 1;
    }
}

} // namespace reducebench
