#include "churn/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "churn/errors.hpp"
#include "churn/format.hpp"
#include "churn/model_io.hpp"
#include "churn/rng.hpp"
#include "churn/shap.hpp"

namespace churn {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(value);
    while (std::getline(ss, item, ',')) {
        std::size_t a = item.find_first_not_of(" \t");
        std::size_t b = item.find_last_not_of(" \t");
        if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
    }
    return out;
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("not a boolean: " + v);
}

void write_text_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << content;
}

std::string json_text(const ordered_json& j) { return j.dump(2) + "\n"; }

struct Stamp {
    std::string hash;
    std::uint64_t seed;
};

void stamp_json(ordered_json& j, const Stamp& stamp) {
    j["config_hash"] = stamp.hash;
    j["seed"] = stamp.seed;
}

std::string csv_stamp(const Stamp& stamp) {
    return "# config_hash=" + stamp.hash + " seed=" + std::to_string(stamp.seed) + "\n";
}

}  // namespace

void apply_config_entry(RunConfig& c, const std::string& key, const std::string& value) {
    auto u64 = [&] { return static_cast<std::uint64_t>(std::stoull(value)); };
    auto sz = [&] { return static_cast<std::size_t>(std::stoull(value)); };
    auto real = [&] { return std::stod(value); };

    if (key == "data.path") c.data_path = value;
    else if (key == "data.drop") c.drop_list = split_list(value);
    else if (key == "data.allow_missing") c.allow_missing = parse_bool(value);
    else if (key == "split.fraction") c.split.train_fraction = real();
    else if (key == "split.seed") c.split.seed = u64();
    else if (key == "split.stratified") c.split.stratified = parse_bool(value);
    else if (key == "logistic.learning_rate") c.logistic.learning_rate = real();
    else if (key == "logistic.max_iters") c.logistic.max_iters = sz();
    else if (key == "logistic.l2") c.logistic.l2 = real();
    else if (key == "logistic.tolerance") c.logistic.tolerance = real();
    else if (key == "tree.max_depth") c.tree.max_depth = sz();
    else if (key == "tree.min_samples_leaf") c.tree.min_samples_leaf = sz();
    else if (key == "forest.n_trees") c.forest.n_trees = sz();
    else if (key == "forest.mtry") c.forest.mtry = sz();
    else if (key == "forest.max_depth") c.forest.max_depth = sz();
    else if (key == "forest.min_samples_leaf") c.forest.min_samples_leaf = sz();
    else if (key == "forest.seed") c.forest.seed = u64();
    else if (key == "forest.bootstrap") c.forest.bootstrap = parse_bool(value);
    else if (key == "gbt.colsample_bylevel") c.gbt.colsample_bylevel = real();
    else if (key == "gbt.colsample_bytree") c.gbt.colsample_bytree = real();
    else if (key == "gbt.learning_rate") c.gbt.learning_rate = real();
    else if (key == "gbt.gamma") c.gbt.gamma = real();
    else if (key == "gbt.max_depth") c.gbt.max_depth = sz();
    else if (key == "gbt.max_delta_step") c.gbt.max_delta_step = real();
    else if (key == "gbt.min_child_weight") c.gbt.min_child_weight = real();
    else if (key == "gbt.n_estimators") c.gbt.n_estimators = sz();
    else if (key == "gbt.reg_lambda") c.gbt.reg_lambda = real();
    else if (key == "gbt.scale_pos_weight") c.gbt.scale_pos_weight = real();
    else if (key == "gbt.subsample") c.gbt.subsample = real();
    else if (key == "gbt.seed") c.gbt.seed = u64();
    else if (key == "explain.background_size") c.explain.background_size = sz();
    else if (key == "explain.seed") c.explain.seed = u64();
    else if (key == "out.dir") c.out_dir = value;
    else if (key == "run.threads") c.threads = sz();
    else if (key == "run.verbosity") c.verbosity = static_cast<int>(std::stol(value));
    else throw ConfigError("unknown config key: " + key);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    RunConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
        std::size_t a = line.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) continue;
        std::size_t b = line.find_last_not_of(" \t\r\n");
        line = line.substr(a, b - a + 1);
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto strip = [](std::string s) {
            std::size_t x = s.find_first_not_of(" \t");
            if (x == std::string::npos) return std::string{};
            std::size_t y = s.find_last_not_of(" \t");
            return s.substr(x, y - x + 1);
        };
        try {
            apply_config_entry(config, strip(key), strip(value));
        } catch (const std::invalid_argument&) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": bad value \"" + value +
                              "\" for " + key);
        }
    }
    return config;
}

std::string canonical_config(const RunConfig& c) {
    std::ostringstream out;
    out << "data.path=" << c.data_path << "\n";
    out << "data.drop=";
    for (std::size_t i = 0; i < c.drop_list.size(); ++i)
        out << (i ? "," : "") << c.drop_list[i];
    out << "\n";
    out << "data.allow_missing=" << (c.allow_missing ? 1 : 0) << "\n";
    out << "split.fraction=" << format_full(c.split.train_fraction) << "\n";
    out << "split.seed=" << c.split.seed << "\n";
    out << "split.stratified=" << (c.split.stratified ? 1 : 0) << "\n";
    out << "logistic.learning_rate=" << format_full(c.logistic.learning_rate) << "\n";
    out << "logistic.max_iters=" << c.logistic.max_iters << "\n";
    out << "logistic.l2=" << format_full(c.logistic.l2) << "\n";
    out << "logistic.tolerance=" << format_full(c.logistic.tolerance) << "\n";
    out << "tree.max_depth=" << c.tree.max_depth << "\n";
    out << "tree.min_samples_leaf=" << c.tree.min_samples_leaf << "\n";
    out << "forest.n_trees=" << c.forest.n_trees << "\n";
    out << "forest.mtry=" << c.forest.mtry << "\n";
    out << "forest.max_depth=" << c.forest.max_depth << "\n";
    out << "forest.min_samples_leaf=" << c.forest.min_samples_leaf << "\n";
    out << "forest.seed=" << c.forest.seed << "\n";
    out << "forest.bootstrap=" << (c.forest.bootstrap ? 1 : 0) << "\n";
    out << "gbt.colsample_bylevel=" << format_full(c.gbt.colsample_bylevel) << "\n";
    out << "gbt.colsample_bytree=" << format_full(c.gbt.colsample_bytree) << "\n";
    out << "gbt.learning_rate=" << format_full(c.gbt.learning_rate) << "\n";
    out << "gbt.gamma=" << format_full(c.gbt.gamma) << "\n";
    out << "gbt.max_depth=" << c.gbt.max_depth << "\n";
    out << "gbt.max_delta_step=" << format_full(c.gbt.max_delta_step) << "\n";
    out << "gbt.min_child_weight=" << format_full(c.gbt.min_child_weight) << "\n";
    out << "gbt.n_estimators=" << c.gbt.n_estimators << "\n";
    out << "gbt.reg_lambda=" << format_full(c.gbt.reg_lambda) << "\n";
    out << "gbt.scale_pos_weight=" << format_full(c.gbt.scale_pos_weight) << "\n";
    out << "gbt.subsample=" << format_full(c.gbt.subsample) << "\n";
    out << "gbt.seed=" << c.gbt.seed << "\n";
    out << "explain.background_size=" << c.explain.background_size << "\n";
    out << "explain.seed=" << c.explain.seed << "\n";
    return out.str();
}

std::string config_hash(const RunConfig& config) {
    std::string text = canonical_config(config);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001B3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::uint64_t index_hash(const std::vector<std::size_t>& indices) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (std::size_t i : indices) {
        for (int b = 0; b < 8; ++b) {
            h ^= (i >> (8 * b)) & 0xFF;
            h *= 0x100000001B3ULL;
        }
    }
    return h;
}

namespace {

Stamp make_stamp(const RunConfig& config) { return {config_hash(config), config.split.seed}; }

ordered_json missing_to_json(const MissingReport& report) {
    ordered_json j;
    j["total"] = report.total;
    ordered_json cols = ordered_json::object();
    for (const auto& [name, count] : report.counts) cols[name] = count;
    j["per_column"] = cols;
    return j;
}

ordered_json duplicates_to_json(const DuplicateReport& report) {
    ordered_json j;
    j["key_column"] = report.key_column;
    j["group_count"] = report.groups.size();
    ordered_json groups = ordered_json::array();
    for (const auto& g : report.groups) {
        ordered_json item;
        item["key"] = g.key;
        item["rows"] = g.row_indices;
        groups.push_back(item);
    }
    j["groups"] = groups;
    return j;
}

void write_processed_csv(const fs::path& path, const FeatureMatrix& X, const LabelVector& y) {
    std::ostringstream out;
    for (std::size_t j = 0; j < X.d; ++j) out << X.names[j] << ",";
    out << "Churn\n";
    for (std::size_t i = 0; i < X.n; ++i) {
        for (std::size_t j = 0; j < X.d; ++j) out << format_full(X(i, j)) << ",";
        out << y.y[i] << "\n";
    }
    write_text_file(path, out.str());
}

ordered_json report_to_json(const ClassificationReport& r) {
    ordered_json j;
    auto cls = [](const ClassMetrics& c) {
        ordered_json o;
        o["precision"] = c.precision;
        o["recall"] = c.recall;
        o["f1"] = c.f1;
        o["support"] = c.support;
        return o;
    };
    j["not_churn"] = cls(r.per_class[0]);
    j["churn"] = cls(r.per_class[1]);
    j["accuracy"] = r.accuracy;
    j["macro"] = {{"precision", r.macro_precision},
                  {"recall", r.macro_recall},
                  {"f1", r.macro_f1}};
    j["weighted"] = {{"precision", r.weighted_precision},
                     {"recall", r.weighted_recall},
                     {"f1", r.weighted_f1}};
    j["total"] = r.total;
    j["zero_denominator_fallback"] = r.zero_denominator;
    return j;
}

// Table-1 layout, 2-decimal cells.
std::string render_report(const ClassificationReport& r) {
    auto f2 = [](double v) { return format_fixed(v, 2); };
    std::ostringstream out;
    auto row = [&](const std::string& label, const std::string& p, const std::string& rec,
                   const std::string& f1, const std::string& support) {
        out << std::left;
        out.width(14);
        out << label;
        for (const std::string* cell : {&p, &rec, &f1, &support}) {
            out << std::right;
            out.width(11);
            out << *cell;
        }
        out << "\n";
    };
    row("", "precision", "recall", "f1-score", "support");
    row("Not Churn", f2(r.per_class[0].precision), f2(r.per_class[0].recall),
        f2(r.per_class[0].f1), std::to_string(r.per_class[0].support));
    row("Churn", f2(r.per_class[1].precision), f2(r.per_class[1].recall), f2(r.per_class[1].f1),
        std::to_string(r.per_class[1].support));
    row("Accuracy", "", "", f2(r.accuracy), std::to_string(r.total));
    row("Macro avg.", f2(r.macro_precision), f2(r.macro_recall), f2(r.macro_f1),
        std::to_string(r.total));
    row("Weighted avg.", f2(r.weighted_precision), f2(r.weighted_recall), f2(r.weighted_f1),
        std::to_string(r.total));
    return out.str();
}

std::string curve_csv(const CurvePoints& curve, const std::string& x_name,
                      const std::string& y_name, const Stamp& stamp, bool with_auc) {
    std::ostringstream out;
    out << csv_stamp(stamp);
    if (with_auc) out << "# auc=" << format_full(curve.auc) << "\n";
    out << x_name << "," << y_name << ",threshold\n";
    for (std::size_t k = 0; k < curve.x.size(); ++k) {
        out << format_full(curve.x[k]) << "," << format_full(curve.y[k]) << ",";
        if (std::isnan(curve.threshold[k]))
            out << "";
        else
            out << format_full(curve.threshold[k]);
        out << "\n";
    }
    return out.str();
}

std::vector<int> threshold_labels(const std::vector<double>& probs) {
    std::vector<int> labels(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) labels[i] = probs[i] >= 0.5 ? 1 : 0;
    return labels;
}

std::vector<double> model_scores(const AnyModel& model, const FeatureMatrix& X) {
    struct Visitor {
        const FeatureMatrix& X;
        std::vector<double> operator()(const LogisticModel& m) const {
            return predict_proba_logistic(m, X);
        }
        std::vector<double> operator()(const TreeClassifier& m) const {
            return predict_tree(m.tree, X);
        }
        std::vector<double> operator()(const ForestClassifier& m) const {
            return predict_forest(m.forest, X);
        }
        std::vector<double> operator()(const GbtClassifier& m) const {
            return predict_proba_gbt(m.model, X);
        }
    };
    return std::visit(Visitor{X}, model);
}

void check_model_dims(const AnyModel& model, const FeatureMatrix& X) {
    std::size_t model_d = model_feature_names(model).size();
    if (model_d != X.d)
        throw DataError("model expects d=" + std::to_string(model_d) + " features but data has d=" +
                        std::to_string(X.d));
}

}  // namespace

PreprocessOutput cmd_preprocess(const RunConfig& config) {
    const Stamp stamp = make_stamp(config);
    RawTable raw = load_csv(config.data_path, telco_schema());

    PreprocessOutput out;
    out.missing = check_missing(raw);
    if (out.missing.total > 0 && !config.allow_missing)
        throw DataError("dataset has " + std::to_string(out.missing.total) +
                        " missing cells; pass data.allow_missing=true to proceed");

    RawTable converted = convert_types(raw);
    out.duplicates = check_duplicates(converted, "Phone");
    auto [X, y] = select_features(converted, config.drop_list);
    out.X = std::move(X);
    out.y = std::move(y);

    fs::path dir(config.out_dir);
    write_processed_csv(dir / "processed.csv", out.X, out.y);

    ordered_json missing_json = missing_to_json(out.missing);
    stamp_json(missing_json, stamp);
    write_text_file(dir / "missing_report.json", json_text(missing_json));

    ordered_json dup_json = duplicates_to_json(out.duplicates);
    stamp_json(dup_json, stamp);
    write_text_file(dir / "duplicate_report.json", json_text(dup_json));

    std::size_t positives = 0;
    for (int v : out.y.y) positives += static_cast<std::size_t>(v);
    ordered_json manifest;
    manifest["dataset"] = config.data_path;
    manifest["n_rows"] = out.X.n;
    manifest["n_features"] = out.X.d;
    manifest["feature_names"] = out.X.names;
    manifest["dropped_columns"] = config.drop_list;
    manifest["positives"] = positives;
    manifest["positive_rate"] = static_cast<double>(positives) / static_cast<double>(out.X.n);
    manifest["missing_cells"] = out.missing.total;
    manifest["duplicate_phone_groups"] = out.duplicates.groups.size();
    stamp_json(manifest, stamp);
    write_text_file(dir / "manifest.json", json_text(manifest));
    return out;
}

std::pair<FeatureMatrix, LabelVector> load_processed(const RunConfig& config) {
    fs::path path = fs::path(config.out_dir) / "processed.csv";
    std::ifstream in(path);
    if (!in)
        throw DataError("no processed data at " + path.string() + "; run preprocess first");
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty processed file: " + path.string());

    FeatureMatrix X;
    LabelVector y;
    std::istringstream header(line);
    std::string name;
    std::vector<std::string> names;
    while (std::getline(header, name, ',')) names.push_back(name);
    if (names.empty() || names.back() != "Churn")
        throw DataError("processed file missing Churn column: " + path.string());
    names.pop_back();
    X.names = names;
    X.d = names.size();

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != X.d + 1)
            throw DataError("processed file row arity mismatch: " + path.string());
        for (std::size_t j = 0; j < X.d; ++j) X.values.push_back(row[j]);
        y.y.push_back(static_cast<int>(row.back()));
        ++X.n;
    }
    X.validate();
    y.validate();
    return {std::move(X), std::move(y)};
}

std::string cmd_train(const RunConfig& config, const std::string& model_name) {
    if (model_name != "logistic" && model_name != "tree" && model_name != "forest" &&
        model_name != "gbt")
        throw ConfigError("unknown model \"" + model_name +
                          "\"; valid names: logistic, tree, forest, gbt");

    const Stamp stamp = make_stamp(config);
    auto [X, y] = load_processed(config);
    TrainTestSplit split = train_test_split(X, y, config.split);

    auto start = std::chrono::steady_clock::now();
    AnyModel model = [&]() -> AnyModel {
        if (model_name == "logistic")
            return fit_logistic(split.train_X, split.train_y, config.logistic);
        if (model_name == "tree")
            return TreeClassifier{X.names, fit_tree(split.train_X, split.train_y, config.tree)};
        if (model_name == "forest")
            return ForestClassifier{X.names,
                                    fit_forest(split.train_X, split.train_y, config.forest)};
        return GbtClassifier{X.names, fit_gbt(split.train_X, split.train_y, config.gbt)};
    }();
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);

    fs::path model_path = fs::path(config.out_dir) / "models" / (model_name + ".model");
    fs::create_directories(model_path.parent_path());
    save_model_file(model, model_path.string());

    ordered_json log;
    log["model"] = model_name;
    log["train_rows"] = split.train_X.n;
    log["test_rows"] = split.test_X.n;
    log["train_positives"] = split.train_positives();
    log["test_positives"] = split.test_positives();
    log["train_index_hash"] = index_hash(split.train_indices);
    log["test_index_hash"] = index_hash(split.test_indices);
    log["wall_time_seconds"] = elapsed.count();
    stamp_json(log, stamp);
    write_text_file(fs::path(config.out_dir) / "logs" / ("train_" + model_name + ".json"),
                    json_text(log));
    return model_path.string();
}

EvalOutput cmd_evaluate(const RunConfig& config, const std::string& model_path, bool on_train) {
    const Stamp stamp = make_stamp(config);
    AnyModel model = load_model_file(model_path);
    auto [X, y] = load_processed(config);
    check_model_dims(model, X);
    TrainTestSplit split = train_test_split(X, y, config.split);

    // Leakage guard: the partition we are about to score must be the same
    // one the training log recorded, and disjoint from the train rows.
    std::string kind = model_kind(model);
    fs::path log_path = fs::path(config.out_dir) / "logs" / ("train_" + kind + ".json");
    if (fs::exists(log_path)) {
        std::ifstream in(log_path);
        json log = json::parse(in);
        if (log.contains("train_index_hash") &&
            log["train_index_hash"].get<std::uint64_t>() != index_hash(split.train_indices))
            throw DataError("train partition changed since " + kind +
                            " was trained; re-run train with the current config");
    }
    for (std::size_t i : split.test_indices)
        if (std::find(split.train_indices.begin(), split.train_indices.end(), i) !=
            split.train_indices.end())
            throw DataError("split invariant violated: row in both partitions");

    const FeatureMatrix& Xe = on_train ? split.train_X : split.test_X;
    const LabelVector& ye = on_train ? split.train_y : split.test_y;

    EvalOutput out;
    std::vector<double> scores = model_scores(model, Xe);
    std::vector<int> predicted = threshold_labels(scores);
    out.report = classification_report(ye.y, predicted);
    out.roc = roc_curve(ye.y, scores);
    out.pr = pr_curve(ye.y, scores);

    std::string suffix = kind + (on_train ? ".train" : "");
    fs::path dir(config.out_dir);

    ordered_json report_json = report_to_json(out.report);
    report_json["model"] = kind;
    report_json["partition"] = on_train ? "train" : "test";
    report_json["roc_auc"] = out.roc.auc;
    stamp_json(report_json, stamp);
    write_text_file(dir / ("eval_" + suffix + ".json"), json_text(report_json));
    write_text_file(dir / ("eval_" + suffix + ".txt"), render_report(out.report));
    write_text_file(dir / ("roc_" + suffix + ".csv"),
                    curve_csv(out.roc, "fpr", "tpr", stamp, true));
    write_text_file(dir / ("pr_" + suffix + ".csv"),
                    curve_csv(out.pr, "recall", "precision", stamp, false));
    return out;
}

ComparisonTable cmd_compare(const RunConfig& config) {
    const Stamp stamp = make_stamp(config);
    static const std::pair<const char*, const char*> kModels[] = {
        {"logistic", "Logistic Regression"},
        {"tree", "Decision Tree"},
        {"forest", "Random Forest"},
        {"gbt", "XG Boost Classifier"},
    };

    ComparisonTable table;
    for (const auto& [name, label] : kModels) {
        std::string model_path = cmd_train(config, name);
        EvalOutput eval = cmd_evaluate(config, model_path);
        table.rows.push_back({label, eval.report.accuracy, eval.report.per_class[1].f1});
    }

    std::ostringstream text;
    text << "S.No.  Classifier Name        Accuracy Score  F1 Score\n";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const ComparisonRow& r = table.rows[i];
        text << i + 1 << "      ";
        text << std::left;
        text.width(23);
        text << r.name;
        text << format_fixed(r.accuracy, 3) << "           " << format_fixed(r.churn_f1, 3)
             << "\n";
    }
    write_text_file(fs::path(config.out_dir) / "compare.txt", text.str());

    ordered_json j;
    ordered_json rows = ordered_json::array();
    for (const ComparisonRow& r : table.rows) {
        ordered_json row;
        row["classifier"] = r.name;
        row["accuracy"] = r.accuracy;
        row["churn_f1"] = r.churn_f1;
        rows.push_back(row);
    }
    j["rows"] = rows;
    std::vector<std::size_t> ranking(table.rows.size());
    for (std::size_t i = 0; i < ranking.size(); ++i) ranking[i] = i;
    std::stable_sort(ranking.begin(), ranking.end(), [&](std::size_t a, std::size_t b) {
        return table.rows[a].churn_f1 > table.rows[b].churn_f1;
    });
    ordered_json ranked = ordered_json::array();
    for (std::size_t i : ranking) ranked.push_back(table.rows[i].name);
    j["ranking_by_f1"] = ranked;
    stamp_json(j, stamp);
    write_text_file(fs::path(config.out_dir) / "compare.json", json_text(j));
    return table;
}

ExplainOutput cmd_explain(const RunConfig& config, const std::string& model_path,
                          const std::vector<std::size_t>& rows, bool summary) {
    const Stamp stamp = make_stamp(config);
    AnyModel model = load_model_file(model_path);
    std::string kind = model_kind(model);
    if (kind == "logistic")
        throw ConfigError(
            "SHAP explanation needs a tree-based model; for the logistic baseline use the "
            "exact-oracle API (d-limited)");

    auto [X, y] = load_processed(config);
    check_model_dims(model, X);
    TrainTestSplit split = train_test_split(X, y, config.split);

    if (!summary && rows.empty()) throw ConfigError("no rows selected for explanation");
    std::vector<std::size_t> selected = rows;
    if (summary) {
        selected.resize(split.test_X.n);
        for (std::size_t i = 0; i < selected.size(); ++i) selected[i] = i;
    }
    for (std::size_t r : selected)
        if (r >= split.test_X.n)
            throw DataError("row " + std::to_string(r) + " out of range (test partition has " +
                            std::to_string(split.test_X.n) + " rows)");

    // Background = seeded subsample of the train partition.
    BackgroundSet background;
    if (split.train_X.n <= config.explain.background_size) {
        background.rows = split.train_X;
    } else {
        SplitMix64 rng(config.explain.seed);
        auto picks =
            sample_without_replacement(split.train_X.n, config.explain.background_size, rng);
        background.rows.names = split.train_X.names;
        background.rows.d = split.train_X.d;
        background.rows.n = picks.size();
        for (std::size_t i : picks) {
            auto r = split.train_X.row(i);
            background.rows.values.insert(background.rows.values.end(), r.begin(), r.end());
        }
    }

    TreeEnsembleView view = [&] {
        if (const auto* gbt = std::get_if<GbtClassifier>(&model)) return ensemble_view(gbt->model);
        if (const auto* forest = std::get_if<ForestClassifier>(&model))
            return ensemble_view(forest->forest);
        const auto& tree = std::get<TreeClassifier>(model);
        static thread_local std::vector<Tree> wrap;
        wrap = {tree.tree};
        return ensemble_view(wrap);
    }();

    FeatureMatrix Xsel;
    Xsel.names = split.test_X.names;
    Xsel.d = split.test_X.d;
    Xsel.n = selected.size();
    for (std::size_t r : selected) {
        auto row = split.test_X.row(r);
        Xsel.values.insert(Xsel.values.end(), row.begin(), row.end());
    }

    ShapResult result = tree_shap_matrix(view, background, Xsel);

    ExplainOutput out;
    out.base_value = result.base_value;
    out.names = result.names;
    out.summary = mean_abs_shap(result);

    fs::path dir(config.out_dir);

    std::ostringstream values_csv;
    values_csv << csv_stamp(stamp);
    values_csv << "# base_value=" << format_full(result.base_value)
               << " background_size=" << background.rows.n
               << " background_seed=" << config.explain.seed << " unit=margin\n";
    values_csv << "row";
    for (const std::string& n : result.names) values_csv << "," << n;
    values_csv << ",base,margin\n";
    for (std::size_t i = 0; i < result.n; ++i) {
        double margin = result.base_value;
        values_csv << selected[i];
        for (std::size_t j = 0; j < result.d; ++j) {
            values_csv << "," << format_full(result.phi(i, j));
            margin += result.phi(i, j);
        }
        values_csv << "," << format_full(result.base_value) << "," << format_full(margin) << "\n";
    }
    write_text_file(dir / ("shap_values_" + kind + ".csv"), values_csv.str());

    std::ostringstream summary_csv;
    summary_csv << csv_stamp(stamp);
    summary_csv << "feature,mean_abs_shap\n";
    for (const auto& [feature, value] : out.summary)
        summary_csv << result.names[feature] << "," << format_full(value) << "\n";
    write_text_file(dir / ("shap_summary_" + kind + ".csv"), summary_csv.str());

    if (!summary) {
        for (std::size_t i = 0; i < selected.size(); ++i) {
            ForcePlotData force = force_plot_data(result, i);
            ordered_json j;
            j["row"] = selected[i];
            j["unit"] = "margin";
            j["base"] = force.base;
            j["final_margin"] = force.final_margin;
            ordered_json contributions = ordered_json::array();
            for (const ForceContribution& c : force.contributions) {
                ordered_json item;
                item["feature"] = result.names[c.feature];
                item["phi"] = c.value;
                item["direction"] = c.positive ? "positive" : "negative";
                contributions.push_back(item);
            }
            j["contributions"] = contributions;
            stamp_json(j, stamp);
            write_text_file(dir / ("force_" + kind + "_row" + std::to_string(selected[i]) +
                                   ".json"),
                            json_text(j));
        }
    }
    return out;
}

}  // namespace churn
