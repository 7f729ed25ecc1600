#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "churn/errors.hpp"
#include "churn/format.hpp"
#include "churn/pipeline.hpp"
#include "churn/synth.hpp"

namespace {

struct GlobalOptions {
    std::string config_path;
    std::string out_dir;
    std::string data_path;
    std::int64_t seed = -1;
    std::size_t threads = 0;
    bool quiet = false;
    bool verbose = false;
};

churn::RunConfig resolve_config(const GlobalOptions& opts) {
    churn::RunConfig config;
    if (!opts.config_path.empty()) config = churn::load_config(opts.config_path);
    if (!opts.out_dir.empty()) config.out_dir = opts.out_dir;
    if (!opts.data_path.empty()) config.data_path = opts.data_path;
    if (opts.seed >= 0) {
        auto s = static_cast<std::uint64_t>(opts.seed);
        config.split.seed = s;
        config.forest.seed = s;
        config.gbt.seed = s;
        config.explain.seed = s;
    }
    if (opts.threads > 0) config.threads = opts.threads;
    if (opts.quiet) config.verbosity = 0;
    if (opts.verbose) config.verbosity = 2;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Telco churn prediction pipeline: preprocess, train, evaluate, compare, explain"};
    app.require_subcommand(1);

    GlobalOptions opts;
    app.add_option("--config", opts.config_path, "Flat key=value config file");
    app.add_option("--out-dir", opts.out_dir, "Output directory (overrides config)");
    app.add_option("--data", opts.data_path, "Dataset CSV path (overrides config)");
    app.add_option("--seed", opts.seed, "Seed for split, learners and explainer");
    app.add_option("--threads", opts.threads,
                   "Parallelism hint; never changes numerical results");
    app.add_flag("--quiet", opts.quiet, "Suppress progress output");
    app.add_flag("--verbose", opts.verbose, "Extra progress output");

    auto* preprocess = app.add_subcommand("preprocess", "Ingest, check and persist the dataset");

    std::string model_name;
    auto* train = app.add_subcommand("train", "Train one classifier on the train partition");
    train->add_option("model", model_name, "logistic | tree | forest | gbt")->required();

    std::string model_path;
    bool on_train = false;
    auto* evaluate = app.add_subcommand("evaluate", "Evaluate a model file on the held-out data");
    evaluate->add_option("model_file", model_path, "Serialized model path")->required();
    evaluate->add_flag("--on-train", on_train,
                       "Score the training partition instead (outputs suffixed .train)");

    auto* compare = app.add_subcommand("compare", "Train and compare all four classifiers");

    std::string explain_model;
    std::vector<std::size_t> explain_rows;
    bool explain_summary = false;
    auto* explain = app.add_subcommand("explain", "SHAP attributions for a tree-based model");
    explain->add_option("model_file", explain_model, "Serialized model path")->required();
    explain->add_option("--rows", explain_rows, "Test-partition row indices to explain");
    explain->add_flag("--summary", explain_summary, "Mean-|SHAP| summary over all test rows");

    std::size_t synth_rows = 3333;
    std::uint64_t synth_seed = 7;
    std::string synth_path = "synthetic_churn.csv";
    auto* synth = app.add_subcommand("synth", "Write a seeded synthetic telco-style dataset");
    synth->add_option("--rows", synth_rows, "Row count");
    synth->add_option("--gen-seed", synth_seed, "Generator seed");
    synth->add_option("--path", synth_path, "Output CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        churn::RunConfig config = resolve_config(opts);
        bool chatty = config.verbosity > 0;

        if (preprocess->parsed()) {
            churn::PreprocessOutput out = churn::cmd_preprocess(config);
            if (chatty) {
                std::size_t positives = 0;
                for (int v : out.y.y) positives += static_cast<std::size_t>(v);
                std::cout << "preprocessed " << out.X.n << " rows, " << out.X.d
                          << " features, positive rate "
                          << churn::format_fixed(
                                 static_cast<double>(positives) / static_cast<double>(out.X.n), 3)
                          << "\n";
                std::cout << "missing cells: " << out.missing.total
                          << ", duplicate phone groups: " << out.duplicates.groups.size() << "\n";
            }
        } else if (train->parsed()) {
            std::string path = churn::cmd_train(config, model_name);
            if (chatty) std::cout << "model written to " << path << "\n";
        } else if (evaluate->parsed()) {
            churn::EvalOutput out = churn::cmd_evaluate(config, model_path, on_train);
            if (chatty) {
                std::cout << "accuracy " << churn::format_fixed(out.report.accuracy, 3)
                          << ", churn F1 "
                          << churn::format_fixed(out.report.per_class[1].f1, 3) << ", ROC AUC "
                          << churn::format_fixed(out.roc.auc, 3) << "\n";
            }
        } else if (compare->parsed()) {
            churn::ComparisonTable table = churn::cmd_compare(config);
            if (chatty) {
                for (const churn::ComparisonRow& row : table.rows)
                    std::cout << row.name << ": accuracy "
                              << churn::format_fixed(row.accuracy, 3) << ", F1 "
                              << churn::format_fixed(row.churn_f1, 3) << "\n";
            }
        } else if (explain->parsed()) {
            if (!explain_summary && explain_rows.empty())
                throw churn::ConfigError("explain: pass --rows or --summary");
            churn::ExplainOutput out =
                churn::cmd_explain(config, explain_model, explain_rows, explain_summary);
            if (chatty) {
                std::cout << "base value (margin): " << churn::format_full(out.base_value)
                          << "\n";
                std::size_t shown = 0;
                for (const auto& [feature, value] : out.summary) {
                    std::cout << "  " << out.names[feature] << ": "
                              << churn::format_full(value) << "\n";
                    if (++shown == 10) break;
                }
            }
        } else if (synth->parsed()) {
            churn::RawTable table = churn::synth_dataset(synth_rows, synth_seed);
            churn::write_csv(table, synth_path);
            if (chatty) std::cout << "wrote " << table.n_rows() << " rows to " << synth_path << "\n";
        }
    } catch (const churn::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const churn::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const churn::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
