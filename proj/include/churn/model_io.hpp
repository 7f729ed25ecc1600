#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "churn/gbt.hpp"
#include "churn/logistic.hpp"
#include "churn/tree.hpp"

namespace churn {

// Classification-tree model with its feature names, as written by the CLI.
struct TreeClassifier {
    std::vector<std::string> names;
    Tree tree;
};

struct ForestClassifier {
    std::vector<std::string> names;
    ForestModel forest;
};

struct GbtClassifier {
    std::vector<std::string> names;
    GbtModel model;
};

using AnyModel = std::variant<LogisticModel, TreeClassifier, ForestClassifier, GbtClassifier>;

// Plain-text model files. Doubles are written with %.17g so a reload is
// bit-exact and identical configs serialize byte-identically.
void save_model(const LogisticModel& model, std::ostream& out);
void save_model(const TreeClassifier& model, std::ostream& out);
void save_model(const ForestClassifier& model, std::ostream& out);
void save_model(const GbtClassifier& model, std::ostream& out);

std::string model_to_string(const AnyModel& model);
void save_model_file(const AnyModel& model, const std::string& path);

AnyModel load_model_file(const std::string& path);

std::string model_kind(const AnyModel& model);
const std::vector<std::string>& model_feature_names(const AnyModel& model);

}  // namespace churn
