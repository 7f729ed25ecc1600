// End-to-end checks of the installed CLI binary (path in $CHURN_CLI):
// the documented workflow succeeds and each error class maps to its
// exit code. Exit code of this harness is the number of failures.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

int failures = 0;
std::string cli;
fs::path work;

int run(const std::string& args) {
    std::string command = "\"" + cli + "\" " + args + " >" + (work / "stdout.txt").string() +
                          " 2>" + (work / "stderr.txt").string();
    int status = std::system(command.c_str());
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

void expect_exit(const std::string& args, int want, const std::string& label) {
    int got = run(args);
    if (got != want) {
        std::cout << "[FAIL] " << label << ": exit " << got << ", expected " << want << "\n";
        std::ifstream err(work / "stderr.txt");
        std::string line;
        while (std::getline(err, line)) std::cout << "       " << line << "\n";
        ++failures;
    } else {
        std::cout << "[ok] " << label << "\n";
    }
}

void expect_file(const fs::path& path, const std::string& label) {
    if (!fs::exists(path)) {
        std::cout << "[FAIL] " << label << ": missing " << path << "\n";
        ++failures;
    } else {
        std::cout << "[ok] " << label << "\n";
    }
}

}  // namespace

int main() {
    const char* env = std::getenv("CHURN_CLI");
    if (!env) {
        std::cout << "[FAIL] CHURN_CLI is not set\n";
        return 1;
    }
    cli = env;
    work = fs::temp_directory_path() / ("churn_cli_it_" + std::to_string(::getpid()));
    fs::create_directories(work);

    fs::path data = work / "data.csv";
    fs::path out = work / "out";
    std::string common = "--data " + data.string() + " --out-dir " + out.string() +
                         " --seed 42 --quiet ";

    expect_exit("synth --rows 260 --gen-seed 9 --path " + data.string(), 0, "synth");
    expect_file(data, "synthetic dataset written");

    expect_exit(common + "preprocess", 0, "preprocess");
    expect_file(out / "manifest.json", "manifest written");
    expect_file(out / "processed.csv", "processed data written");

    expect_exit(common + "train gbt", 0, "train gbt");
    fs::path model = out / "models" / "gbt.model";
    expect_file(model, "model written");

    expect_exit(common + "evaluate " + model.string(), 0, "evaluate");
    expect_file(out / "eval_gbt.txt", "evaluation report written");
    expect_file(out / "roc_gbt.csv", "roc curve written");

    expect_exit(common + "explain " + model.string() + " --rows 0", 0, "explain one row");
    expect_file(out / "shap_values_gbt.csv", "shap values written");
    expect_file(out / "force_gbt_row0.json", "force plot data written");

    expect_exit(common + "explain " + model.string() + " --summary", 0, "explain summary");
    expect_file(out / "shap_summary_gbt.csv", "shap summary written");

    // Error classes.
    expect_exit(common + "train svm", 1, "unknown model name is a config error");
    expect_exit("--data " + (work / "no_such.csv").string() + " --out-dir " + out.string() +
                    " --quiet preprocess",
                2, "missing dataset is a data error");
    expect_exit(common + "evaluate " + (work / "no_such.model").string(), 2,
                "missing model file is a data error");
    expect_exit(common + "explain " + model.string(), 1, "explain without row selection");

    std::ofstream(work / "bad.cfg") << "no.such.key=1\n";
    expect_exit("--config " + (work / "bad.cfg").string() + " preprocess", 1,
                "unknown config key is a config error");

    int no_subcommand = run("");
    if (no_subcommand == 0) {
        std::cout << "[FAIL] bare invocation should not succeed\n";
        ++failures;
    } else {
        std::cout << "[ok] bare invocation rejected\n";
    }

    if (failures == 0) fs::remove_all(work);
    return failures;
}
