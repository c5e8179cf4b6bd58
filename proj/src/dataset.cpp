#include "reducebench/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <unordered_map>

#include "reducebench/rng.hpp"

namespace reducebench {

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(class_names.size(), 0);
    for (int label : labels) counts[static_cast<std::size_t>(label)]++;
    return counts;
}

std::vector<std::string> Dataset::decode_labels() const {
    std::vector<std::string> out;
    out.reserve(labels.size());
    for (int label : labels) out.push_back(class_names[static_cast<std::size_t>(label)]);
    return out;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return fields;
}

bool is_missing(const std::string& cell) { return cell.empty() || cell == "?"; }

bool parse_double(const std::string& cell, double& out) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

} // namespace

Dataset load_csv(const std::string& path, const CsvSchema& schema, const std::string& name) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::FileNotFound, path);

    Dataset ds;
    ds.name = name.empty() ? std::filesystem::path(path).stem().string() : name;
    ds.source_path = path;

    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;

    if (schema.has_header) {
        if (!std::getline(in, line))
            throw Error(ErrorCode::EmptyDataset, path);
        ++line_no;
        header = split_fields(line);
    }

    std::size_t n_columns = 0;
    std::size_t label_col = 0;
    std::unordered_map<std::string, int> label_index;
    std::vector<std::vector<double>> rows;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split_fields(line);

        if (n_columns == 0) {
            n_columns = fields.size();
            if (n_columns < 2)
                throw Error(ErrorCode::MalformedRow,
                            path + ":" + std::to_string(line_no) + ": need at least one feature and a label column");
            if (!schema.label_column_name.empty()) {
                auto it = std::find(header.begin(), header.end(), schema.label_column_name);
                if (it == header.end())
                    throw Error(ErrorCode::InvalidConfig,
                                "label column '" + schema.label_column_name + "' not in header of " + path);
                label_col = static_cast<std::size_t>(it - header.begin());
            } else if (schema.label_column < 0) {
                label_col = n_columns - 1;
            } else {
                label_col = static_cast<std::size_t>(schema.label_column);
            }
            if (label_col >= n_columns)
                throw Error(ErrorCode::InvalidConfig,
                            "label column " + std::to_string(label_col) + " out of range for " + path);
        }

        if (fields.size() != n_columns)
            throw Error(ErrorCode::MalformedRow,
                        path + ":" + std::to_string(line_no) + ": expected " + std::to_string(n_columns) +
                            " fields, got " + std::to_string(fields.size()));

        bool missing = false;
        for (const std::string& cell : fields)
            if (is_missing(cell)) { missing = true; break; }
        if (missing) {
            ds.dropped_rows.push_back(line_no);
            continue;
        }

        std::vector<double> feature_row;
        feature_row.reserve(n_columns - 1);
        for (std::size_t c = 0; c < n_columns; ++c) {
            if (c == label_col) continue;
            double v = 0.0;
            if (!parse_double(fields[c], v) || !std::isfinite(v))
                throw Error(ErrorCode::NonNumericFeature,
                            path + ":" + std::to_string(line_no) + ": column " + std::to_string(c) +
                                ": '" + fields[c] + "'");
            feature_row.push_back(v);
        }

        const std::string& label = fields[label_col];
        auto [it, inserted] = label_index.emplace(label, static_cast<int>(ds.class_names.size()));
        if (inserted) ds.class_names.push_back(label);
        ds.labels.push_back(it->second);
        rows.push_back(std::move(feature_row));
    }

    if (rows.empty())
        throw Error(ErrorCode::EmptyDataset, path);
    if (ds.class_names.size() < 2)
        throw Error(ErrorCode::SingleClassDataset,
                    path + ": every row carries label '" + ds.class_names.front() + "'");

    ds.features = Matrix::from_rows(rows);
    ds.d_original = ds.features.cols();
    return ds;
}

ScalerParams fit_scaler(const Matrix& train_features) {
    if (train_features.rows() == 0 || train_features.cols() == 0)
        throw Error(ErrorCode::EmptyDataset, "fit_scaler on empty matrix");
    const std::size_t d = train_features.cols();
    ScalerParams p;
    p.min.assign(d, 0.0);
    p.range.assign(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        double lo = train_features(0, j);
        double hi = lo;
        for (std::size_t i = 1; i < train_features.rows(); ++i) {
            lo = std::min(lo, train_features(i, j));
            hi = std::max(hi, train_features(i, j));
        }
        p.min[j] = lo;
        p.range[j] = hi - lo;
    }
    return p;
}

Matrix apply_scaler(const ScalerParams& params, const Matrix& features) {
    if (features.cols() != params.min.size())
        throw Error(ErrorCode::DimensionMismatch,
                    "scaler fit on " + std::to_string(params.min.size()) + " columns, got " +
                        std::to_string(features.cols()));
    Matrix out(features.rows(), features.cols());
    for (std::size_t i = 0; i < features.rows(); ++i) {
        for (std::size_t j = 0; j < features.cols(); ++j) {
            if (params.range[j] == 0.0) {
                out(i, j) = 0.5;
            } else {
                const double v = (features(i, j) - params.min[j]) / params.range[j];
                out(i, j) = std::clamp(v, 0.0, 1.0);
            }
        }
    }
    return out;
}

namespace {

std::size_t holdout_test_count(std::size_t count, double train_fraction) {
    const auto rounded = static_cast<std::size_t>(std::llround(
        static_cast<double>(count) * (1.0 - train_fraction)));
    return std::clamp<std::size_t>(rounded, 1, count - 1);
}

} // namespace

SplitIndices stratified_split(const Dataset& dataset, const SplitSpec& spec) {
    const std::size_t n = dataset.size();
    if (n < 2)
        throw Error(ErrorCode::DegenerateInput, "cannot split fewer than 2 samples");
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
        throw Error(ErrorCode::InvalidConfig, "train_fraction must be in (0, 1)");

    Rng rng(spec.seed);
    SplitIndices out;

    if (spec.stratified) {
        const std::vector<std::size_t> counts = dataset.class_counts();
        for (std::size_t c = 0; c < counts.size(); ++c)
            if (counts[c] < 2)
                throw Error(ErrorCode::ClassTooSmall,
                            "class " + std::to_string(c) + " ('" + dataset.class_names[c] +
                                "') has " + std::to_string(counts[c]) + " sample(s)");

        for (std::size_t c = 0; c < counts.size(); ++c) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < n; ++i)
                if (dataset.labels[i] == static_cast<int>(c)) members.push_back(i);
            rng.shuffle(members);
            const std::size_t n_test = holdout_test_count(members.size(), spec.train_fraction);
            for (std::size_t i = 0; i < members.size(); ++i)
                (i < n_test ? out.test : out.train).push_back(members[i]);
        }
    } else {
        std::vector<std::size_t> indices(n);
        std::iota(indices.begin(), indices.end(), 0);
        rng.shuffle(indices);
        const std::size_t n_test = holdout_test_count(n, spec.train_fraction);
        out.test.assign(indices.begin(), indices.begin() + static_cast<std::ptrdiff_t>(n_test));
        out.train.assign(indices.begin() + static_cast<std::ptrdiff_t>(n_test), indices.end());
    }

    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}


} // namespace reducebench
