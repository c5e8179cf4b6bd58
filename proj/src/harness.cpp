#include "reducebench/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "reducebench/enn.hpp"
#include "reducebench/errors.hpp"
#include "reducebench/knn.hpp"
#include "reducebench/parallel.hpp"
#include "reducebench/serialize.hpp"
#include "reducebench/svm.hpp"

namespace reducebench {

namespace {

const std::set<std::string>& known_reducers() {
    static const std::set<std::string> names = {"none", "autoencoder", "nca"};
    return names;
}

const std::set<std::string>& known_classifiers() {
    static const std::set<std::string> names = {"knn", "enn", "svm"};
    return names;
}

void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key())) {
            throw Error(ErrorCode::InvalidConfig,
                        "unknown key '" + item.key() + "' in " + where);
        }
    }
}

std::vector<std::string> parse_name_list(const nlohmann::json& j, const std::string& key,
                                         const std::set<std::string>& known) {
    if (!j.is_array() || j.empty()) {
        throw Error(ErrorCode::InvalidConfig, key + " must be a non-empty array");
    }
    std::vector<std::string> names;
    for (const nlohmann::json& item : j) {
        if (!item.is_string()) {
            throw Error(ErrorCode::InvalidConfig, key + " entries must be strings");
        }
        const std::string name = item.get<std::string>();
        if (!known.count(name)) {
            throw Error(ErrorCode::InvalidConfig, "unknown " + key + " entry '" + name + "'");
        }
        if (std::find(names.begin(), names.end(), name) != names.end()) {
            throw Error(ErrorCode::InvalidConfig, "duplicate " + key + " entry '" + name + "'");
        }
        names.push_back(name);
    }
    return names;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_mean_std(double mean, double std_dev) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f±%.4f", mean, std_dev);
    return std::string(buf);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
    }
    return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct TaskFailure {
    bool failed = false;
    bool has_code = false;
    ErrorCode code = ErrorCode::InvalidConfig;
    std::string message;
};

struct Aggregate {
    std::size_t count = 0;
    double acc_sum = 0.0;
    std::vector<double> f_values;
    std::vector<double> g_values;
};

double mean_of(const std::vector<double>& values) {
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double sample_std(const std::vector<double>& values, double mean) {
    if (values.size() < 2) return 0.0;
    double s = 0.0;
    for (double v : values) s += (v - mean) * (v - mean);
    return std::sqrt(s / static_cast<double>(values.size() - 1));
}

} // namespace

std::size_t reduced_dimension(std::size_t d) { return (d + 1) / 2; }

RunConfig parse_run_config(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw Error(ErrorCode::InvalidConfig, "config root must be a JSON object");
    }
    reject_unknown_keys(j,
                        {"schema_version", "datasets", "reducers", "classifiers", "repetitions",
                         "base_seed", "train_fraction", "stratified", "output_dir", "autoencoder",
                         "nca", "knn", "enn", "svm"},
                        "config root");
    RunConfig config;
    config.schema_version = j.value("schema_version", 1);
    if (config.schema_version != 1) {
        throw Error(ErrorCode::InvalidConfig, "unsupported schema_version");
    }
    if (!j.contains("datasets")) {
        throw Error(ErrorCode::InvalidConfig, "config needs a datasets array");
    }
    const nlohmann::json& ds = j.at("datasets");
    if (!ds.is_array() || ds.empty()) {
        throw Error(ErrorCode::InvalidConfig, "datasets must be a non-empty array");
    }
    for (const nlohmann::json& entry : ds) {
        reject_unknown_keys(entry, {"name", "path", "label_column", "label_column_name", "has_header"},
                            "dataset entry");
        DatasetSpec spec;
        spec.name = entry.value("name", std::string());
        spec.path = entry.value("path", std::string());
        if (spec.name.empty() || spec.path.empty()) {
            throw Error(ErrorCode::InvalidConfig, "every dataset needs a name and a path");
        }
        spec.label_column = entry.value("label_column", -1);
        spec.label_column_name = entry.value("label_column_name", std::string());
        spec.has_header = entry.value("has_header", false);
        if (spec.label_column < -1) {
            throw Error(ErrorCode::InvalidConfig,
                        "label_column must be -1 (last) or a 0-based index");
        }
        config.datasets.push_back(std::move(spec));
    }
    config.reducers = j.contains("reducers")
                          ? parse_name_list(j.at("reducers"), "reducers", known_reducers())
                          : std::vector<std::string>{"autoencoder", "nca"};
    config.classifiers =
        j.contains("classifiers")
            ? parse_name_list(j.at("classifiers"), "classifiers", known_classifiers())
            : std::vector<std::string>{"knn", "enn", "svm"};
    config.repetitions = j.value("repetitions", std::size_t{10});
    if (config.repetitions < 1) {
        throw Error(ErrorCode::InvalidConfig, "repetitions must be >= 1");
    }
    config.base_seed = j.value("base_seed", std::uint64_t{0});
    config.train_fraction = j.value("train_fraction", 0.9);
    if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "train_fraction must be in (0, 1)");
    }
    config.stratified = j.value("stratified", true);
    config.output_dir = j.value("output_dir", std::string("results"));

    if (j.contains("autoencoder")) {
        const nlohmann::json& a = j.at("autoencoder");
        reject_unknown_keys(a, {"epochs", "learning_rate", "momentum", "batch_size", "init_scale"},
                            "autoencoder block");
        config.autoencoder.epochs = a.value("epochs", config.autoencoder.epochs);
        config.autoencoder.learning_rate =
            a.value("learning_rate", config.autoencoder.learning_rate);
        config.autoencoder.momentum = a.value("momentum", config.autoencoder.momentum);
        config.autoencoder.batch_size = a.value("batch_size", config.autoencoder.batch_size);
        config.autoencoder.init_scale = a.value("init_scale", config.autoencoder.init_scale);
        if (config.autoencoder.epochs < 1 || config.autoencoder.batch_size < 1 ||
            config.autoencoder.learning_rate <= 0.0 || config.autoencoder.momentum < 0.0 ||
            config.autoencoder.momentum >= 1.0 || config.autoencoder.init_scale <= 0.0) {
            throw Error(ErrorCode::InvalidConfig, "autoencoder hyperparameters out of range");
        }
    }
    if (j.contains("nca")) {
        const nlohmann::json& n = j.at("nca");
        reject_unknown_keys(
            n, {"max_iters", "initial_step", "backtrack_factor", "tolerance", "init"},
            "nca block");
        config.nca.max_iters = n.value("max_iters", config.nca.max_iters);
        config.nca.initial_step = n.value("initial_step", config.nca.initial_step);
        config.nca.backtrack_factor = n.value("backtrack_factor", config.nca.backtrack_factor);
        config.nca.tolerance = n.value("tolerance", config.nca.tolerance);
        const std::string init = n.value("init", std::string("scaled_identity"));
        if (init == "scaled_identity") {
            config.nca.init = NcaInit::ScaledIdentity;
        } else if (init == "seeded_random") {
            config.nca.init = NcaInit::SeededRandom;
        } else {
            throw Error(ErrorCode::InvalidConfig, "nca init must be scaled_identity or seeded_random");
        }
        if (config.nca.max_iters < 1 || config.nca.initial_step <= 0.0 ||
            config.nca.backtrack_factor <= 0.0 || config.nca.backtrack_factor >= 1.0 ||
            config.nca.tolerance <= 0.0) {
            throw Error(ErrorCode::InvalidConfig, "nca hyperparameters out of range");
        }
    }
    if (j.contains("knn")) {
        reject_unknown_keys(j.at("knn"), {"k"}, "knn block");
        config.knn_k = j.at("knn").value("k", config.knn_k);
        if (config.knn_k < 1) throw Error(ErrorCode::InvalidConfig, "knn k must be >= 1");
    }
    if (j.contains("enn")) {
        reject_unknown_keys(j.at("enn"), {"k"}, "enn block");
        config.enn_k = j.at("enn").value("k", config.enn_k);
        if (config.enn_k < 1) throw Error(ErrorCode::InvalidConfig, "enn k must be >= 1");
    }
    if (j.contains("svm")) {
        reject_unknown_keys(j.at("svm"), {"C", "tol"}, "svm block");
        config.svm_c = j.at("svm").value("C", config.svm_c);
        config.svm_tol = j.at("svm").value("tol", config.svm_tol);
        if (config.svm_c <= 0.0 || config.svm_tol <= 0.0) {
            throw Error(ErrorCode::InvalidConfig, "svm C and tol must be positive");
        }
    }
    return config;
}

nlohmann::json run_config_to_json(const RunConfig& config) {
    nlohmann::json j;
    j["schema_version"] = config.schema_version;
    j["datasets"] = nlohmann::json::array();
    for (const DatasetSpec& spec : config.datasets) {
        nlohmann::json d;
        d["name"] = spec.name;
        d["path"] = spec.path;
        d["label_column"] = spec.label_column;
        if (!spec.label_column_name.empty()) d["label_column_name"] = spec.label_column_name;
        d["has_header"] = spec.has_header;
        j["datasets"].push_back(std::move(d));
    }
    j["reducers"] = config.reducers;
    j["classifiers"] = config.classifiers;
    j["repetitions"] = config.repetitions;
    j["base_seed"] = config.base_seed;
    j["train_fraction"] = config.train_fraction;
    j["stratified"] = config.stratified;
    j["output_dir"] = config.output_dir;
    j["autoencoder"] = {{"epochs", config.autoencoder.epochs},
                        {"learning_rate", config.autoencoder.learning_rate},
                        {"momentum", config.autoencoder.momentum},
                        {"batch_size", config.autoencoder.batch_size},
                        {"init_scale", config.autoencoder.init_scale}};
    j["nca"] = {{"max_iters", config.nca.max_iters},
                {"initial_step", config.nca.initial_step},
                {"backtrack_factor", config.nca.backtrack_factor},
                {"tolerance", config.nca.tolerance},
                {"init", config.nca.init == NcaInit::ScaledIdentity ? "scaled_identity"
                                                                    : "seeded_random"}};
    j["knn"] = {{"k", config.knn_k}};
    j["enn"] = {{"k", config.enn_k}};
    j["svm"] = {{"C", config.svm_c}, {"tol", config.svm_tol}};
    return j;
}

RunConfig load_and_validate_config(const std::string& path) {
    const RunConfig config = parse_run_config(read_json_file(path));
    for (const DatasetSpec& spec : config.datasets) {
        CsvSchema schema;
        schema.label_column = spec.label_column;
        schema.label_column_name = spec.label_column_name;
        schema.has_header = spec.has_header;
        try {
            load_csv(spec.path, schema, spec.name);
        } catch (const Error& e) {
            throw Error(e.code(), "dataset '" + spec.name + "': " + e.message());
        }
    }
    return config;
}

std::vector<CellResult> run_pipeline(const RunConfig& config) {
    std::vector<Dataset> datasets;
    datasets.reserve(config.datasets.size());
    for (const DatasetSpec& spec : config.datasets) {
        CsvSchema schema;
        schema.label_column = spec.label_column;
        schema.label_column_name = spec.label_column_name;
        schema.has_header = spec.has_header;
        try {
            datasets.push_back(load_csv(spec.path, schema, spec.name));
        } catch (const Error& e) {
            throw Error(e.code(), "dataset '" + spec.name + "': " + e.message());
        }
    }

    const std::size_t n_reducers = config.reducers.size();
    const std::size_t n_classifiers = config.classifiers.size();
    const std::size_t tasks_per_dataset = config.repetitions * n_reducers;
    const std::size_t task_count = datasets.size() * tasks_per_dataset;
    std::vector<CellResult> results(task_count * n_classifiers);
    std::vector<TaskFailure> failures(task_count);

    // One task per (dataset, repetition, reducer); its classifier cells land
    // in fixed slots, so scheduling cannot affect output order or content.
    const long long tasks = static_cast<long long>(task_count);
#pragma omp parallel for schedule(dynamic) num_threads(thread_cap()) if (tasks > 1)
    for (long long task = 0; task < tasks; ++task) {
        const std::size_t t = static_cast<std::size_t>(task);
        const std::size_t d_idx = t / tasks_per_dataset;
        const std::size_t rep = (t % tasks_per_dataset) / n_reducers;
        const std::size_t red_idx = (t % tasks_per_dataset) % n_reducers;
        const Dataset& dataset = datasets[d_idx];
        const std::string& reducer = config.reducers[red_idx];
        const std::uint64_t seed = config.base_seed + rep;
        try {
            SplitSpec split_spec;
            split_spec.train_fraction = config.train_fraction;
            split_spec.seed = seed;
            split_spec.stratified = config.stratified;
            const SplitIndices split = stratified_split(dataset, split_spec);
            const Matrix train_raw = dataset.features.take_rows(split.train);
            const Matrix test_raw = dataset.features.take_rows(split.test);
            std::vector<int> train_labels(split.train.size());
            std::vector<int> test_labels(split.test.size());
            for (std::size_t i = 0; i < split.train.size(); ++i) {
                train_labels[i] = dataset.labels[split.train[i]];
            }
            for (std::size_t i = 0; i < split.test.size(); ++i) {
                test_labels[i] = dataset.labels[split.test[i]];
            }
            const ScalerParams scaler = fit_scaler(train_raw);
            const Matrix train_scaled = apply_scaler(scaler, train_raw);
            const Matrix test_scaled = apply_scaler(scaler, test_raw);

            const std::size_t target_dim = reduced_dimension(dataset.dim());
            const auto reduce_start = std::chrono::steady_clock::now();
            Matrix train_reduced;
            Matrix test_reduced;
            std::size_t reduced_dim = 0;
            if (reducer == "none") {
                train_reduced = train_scaled;
                test_reduced = test_scaled;
                reduced_dim = dataset.dim();
            } else if (reducer == "autoencoder") {
                AeTrainConfig ae = config.autoencoder;
                ae.seed = seed;
                const AutoencoderModel model = train_autoencoder(train_scaled, target_dim, ae);
                train_reduced = reduce_with_autoencoder(model, train_scaled);
                test_reduced = reduce_with_autoencoder(model, test_scaled);
                reduced_dim = target_dim;
            } else {
                NcaConfig nc = config.nca;
                nc.p = target_dim;
                nc.seed = seed;
                const NcaModel model = fit_nca(train_scaled, train_labels, nc);
                train_reduced = transform(model, train_scaled);
                test_reduced = transform(model, test_scaled);
                reduced_dim = target_dim;
            }
            const double reduce_seconds = seconds_since(reduce_start);

            for (std::size_t c_idx = 0; c_idx < n_classifiers; ++c_idx) {
                const std::string& classifier = config.classifiers[c_idx];
                const auto train_start = std::chrono::steady_clock::now();
                std::vector<int> predictions;
                double train_seconds = 0.0;
                if (classifier == "knn") {
                    const KnnModel model = fit_knn(train_reduced, train_labels, config.knn_k);
                    train_seconds = seconds_since(train_start);
                    predictions = knn_predict_batch(model, test_reduced);
                } else if (classifier == "enn") {
                    const EnnModel model = fit_enn(train_reduced, train_labels, config.enn_k);
                    train_seconds = seconds_since(train_start);
                    predictions = enn_predict_batch(model, test_reduced);
                } else {
                    const SvmMulticlassModel model =
                        svm_train_multiclass(train_reduced, train_labels, config.svm_c,
                                             config.svm_tol);
                    train_seconds = seconds_since(train_start);
                    predictions = svm_predict_batch(model, test_reduced);
                }
                const double predict_seconds =
                    seconds_since(train_start) - train_seconds;

                CellResult cell;
                cell.dataset = dataset.name;
                cell.reducer = reducer;
                cell.classifier = classifier;
                cell.repetition = rep;
                cell.seed = seed;
                cell.original_dim = dataset.dim();
                cell.reduced_dim = reduced_dim;
                cell.metrics = evaluate_predictions(
                    confusion(test_labels, predictions, dataset.class_count()));
                cell.timings = {reduce_seconds, train_seconds, predict_seconds};
                results[t * n_classifiers + c_idx] = std::move(cell);
            }
        } catch (const Error& e) {
            failures[t] = {true, true, e.code(),
                           e.message() + " (dataset=" + dataset.name +
                               ", reducer=" + reducer + ", seed=" + std::to_string(seed) + ")"};
        } catch (const std::exception& e) {
            failures[t] = {true, false, ErrorCode::InvalidConfig,
                           std::string(e.what()) + " (dataset=" + dataset.name +
                               ", reducer=" + reducer + ", seed=" + std::to_string(seed) + ")"};
        }
    }

    for (const TaskFailure& failure : failures) {
        if (!failure.failed) continue;
        if (failure.has_code) throw Error(failure.code, failure.message);
        throw std::runtime_error(failure.message);
    }
    return results;
}

void emit_reports(const std::vector<CellResult>& results, const RunConfig& config,
                  const std::string& out_dir) {
    if (results.empty()) {
        throw Error(ErrorCode::EmptyResults, "no results to report");
    }
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);

    {
        std::ofstream out = open_output(dir / "results.csv");
        out << "dataset,reducer,classifier,seed,accuracy,f_measure,g_mean\n";
        for (const CellResult& r : results) {
            out << csv_escape(r.dataset) << ',' << r.reducer << ',' << r.classifier << ','
                << r.seed << ',' << format_double(r.metrics.accuracy) << ','
                << format_double(r.metrics.f_measure) << ',' << format_double(r.metrics.g_mean)
                << '\n';
        }
    }

    // Aggregates keyed by (dataset, reducer, classifier) in config order.
    std::vector<std::string> dataset_names;
    for (const DatasetSpec& spec : config.datasets) dataset_names.push_back(spec.name);
    const auto index_of = [](const std::vector<std::string>& names, const std::string& name) {
        const auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) {
            throw Error(ErrorCode::InvalidConfig, "result references unknown name '" + name + "'");
        }
        return static_cast<std::size_t>(it - names.begin());
    };
    const std::size_t n_d = dataset_names.size();
    const std::size_t n_r = config.reducers.size();
    const std::size_t n_c = config.classifiers.size();
    std::vector<Aggregate> agg(n_d * n_r * n_c);
    for (const CellResult& r : results) {
        const std::size_t d = index_of(dataset_names, r.dataset);
        const std::size_t red = index_of(config.reducers, r.reducer);
        const std::size_t cls = index_of(config.classifiers, r.classifier);
        Aggregate& a = agg[(d * n_r + red) * n_c + cls];
        a.count += 1;
        a.acc_sum += r.metrics.accuracy;
        a.f_values.push_back(r.metrics.f_measure);
        a.g_values.push_back(r.metrics.g_mean);
    }

    {
        std::ofstream out = open_output(dir / "summary.csv");
        out << "dataset,reducer";
        for (const std::string& cls : config.classifiers) {
            out << ',' << cls << "_f_measure," << cls << "_g_mean";
        }
        out << '\n';
        for (std::size_t d = 0; d < n_d; ++d) {
            for (std::size_t red = 0; red < n_r; ++red) {
                out << csv_escape(dataset_names[d]) << ',' << config.reducers[red];
                for (std::size_t cls = 0; cls < n_c; ++cls) {
                    const Aggregate& a = agg[(d * n_r + red) * n_c + cls];
                    if (a.count == 0) {
                        out << ",,";
                        continue;
                    }
                    const double f_mean = mean_of(a.f_values);
                    const double g_mean_v = mean_of(a.g_values);
                    out << ',' << format_mean_std(f_mean, sample_std(a.f_values, f_mean)) << ','
                        << format_mean_std(g_mean_v, sample_std(a.g_values, g_mean_v));
                }
                out << '\n';
            }
        }
    }

    {
        std::ofstream out = open_output(dir / "accuracy_plotdata.csv");
        out << "dataset,reducer,classifier,mean_accuracy\n";
        for (std::size_t d = 0; d < n_d; ++d) {
            for (std::size_t red = 0; red < n_r; ++red) {
                for (std::size_t cls = 0; cls < n_c; ++cls) {
                    const Aggregate& a = agg[(d * n_r + red) * n_c + cls];
                    if (a.count == 0) continue;
                    out << csv_escape(dataset_names[d]) << ',' << config.reducers[red] << ','
                        << config.classifiers[cls] << ','
                        << format_double(a.acc_sum / static_cast<double>(a.count)) << '\n';
                }
            }
        }
    }

    {
        nlohmann::json report;
        report["schema_version"] = 1;
        report["config"] = run_config_to_json(config);
        report["metric_definitions"] = {
            {"accuracy", "trace of the confusion matrix over total count"},
            {"f_measure", "macro-averaged F1 with the 0/0 convention F_j = 0"},
            {"g_mean", "geometric mean of per-class recalls, empty true classes excluded"}};
        report["cells"] = nlohmann::json::array();
        for (const CellResult& r : results) {
            nlohmann::json c;
            c["dataset"] = r.dataset;
            c["reducer"] = r.reducer;
            c["classifier"] = r.classifier;
            c["repetition"] = r.repetition;
            c["seed"] = r.seed;
            c["original_dim"] = r.original_dim;
            c["reduced_dim"] = r.reduced_dim;
            c["accuracy"] = r.metrics.accuracy;
            c["f_measure"] = r.metrics.f_measure;
            c["g_mean"] = r.metrics.g_mean;
            c["per_class_precision"] = r.metrics.per_class_precision;
            c["per_class_recall"] = r.metrics.per_class_recall;
            report["cells"].push_back(std::move(c));
        }
        report["summary"] = nlohmann::json::array();
        for (std::size_t d = 0; d < n_d; ++d) {
            for (std::size_t red = 0; red < n_r; ++red) {
                for (std::size_t cls = 0; cls < n_c; ++cls) {
                    const Aggregate& a = agg[(d * n_r + red) * n_c + cls];
                    if (a.count == 0) continue;
                    const double f_mean = mean_of(a.f_values);
                    const double g_mean_v = mean_of(a.g_values);
                    nlohmann::json s;
                    s["dataset"] = dataset_names[d];
                    s["reducer"] = config.reducers[red];
                    s["classifier"] = config.classifiers[cls];
                    s["repetitions"] = a.count;
                    s["mean_accuracy"] = a.acc_sum / static_cast<double>(a.count);
                    s["mean_f_measure"] = f_mean;
                    s["std_f_measure"] = sample_std(a.f_values, f_mean);
                    s["mean_g_mean"] = g_mean_v;
                    s["std_g_mean"] = sample_std(a.g_values, g_mean_v);
                    report["summary"].push_back(std::move(s));
                }
            }
        }
        std::ofstream out = open_output(dir / "report.json");
        out << report.dump(2) << '\n';
    }

    {
        std::ofstream out = open_output(dir / "timings.csv");
        out << "dataset,reducer,classifier,seed,reduce_seconds,train_seconds,predict_seconds\n";
        for (const CellResult& r : results) {
            out << csv_escape(r.dataset) << ',' << r.reducer << ',' << r.classifier << ','
                << r.seed << ',' << format_double(r.timings.reduce_seconds) << ','
                << format_double(r.timings.train_seconds) << ','
                << format_double(r.timings.predict_seconds) << '\n';
        }
    }
}

} // namespace reducebench
