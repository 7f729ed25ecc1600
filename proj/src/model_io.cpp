#include "churn/model_io.hpp"

#include <fstream>
#include <sstream>

#include "churn/errors.hpp"
#include "churn/format.hpp"

namespace churn {

namespace {

void write_names(const std::vector<std::string>& names, std::ostream& out) {
    out << "d " << names.size() << "\n";
    for (const auto& n : names) out << "name " << n << "\n";
}

void write_tree(const Tree& tree, std::ostream& out) {
    out << "tree " << tree.nodes.size() << "\n";
    for (const TreeNodeData& nd : tree.nodes) {
        out << "node " << nd.feature << " " << format_full(nd.threshold) << " " << nd.left << " "
            << nd.right << " " << format_full(nd.value) << " " << format_full(nd.gain) << " "
            << nd.n_samples << " " << format_full(nd.cover) << "\n";
    }
}

struct Reader {
    std::istream& in;
    const std::string& path;

    std::string line;

    std::string next_line() {
        if (!std::getline(in, line)) throw DataError("truncated model file: " + path);
        return line;
    }

    // Splits "key rest..." and checks the key.
    std::string expect(const std::string& key) {
        std::string l = next_line();
        if (l.rfind(key + " ", 0) != 0 && l != key)
            throw DataError("model file " + path + ": expected \"" + key + "\", got \"" + l +
                            "\"");
        return l.size() > key.size() ? l.substr(key.size() + 1) : std::string{};
    }

    double expect_double(const std::string& key) { return std::stod(expect(key)); }
    long long expect_int(const std::string& key) { return std::stoll(expect(key)); }

    std::vector<std::string> read_names() {
        auto d = static_cast<std::size_t>(expect_int("d"));
        std::vector<std::string> names;
        names.reserve(d);
        for (std::size_t j = 0; j < d; ++j) names.push_back(expect("name"));
        return names;
    }

    Tree read_tree() {
        auto count = static_cast<std::size_t>(expect_int("tree"));
        Tree tree;
        tree.nodes.reserve(count);
        for (std::size_t k = 0; k < count; ++k) {
            std::istringstream ss(expect("node"));
            TreeNodeData nd;
            if (!(ss >> nd.feature >> nd.threshold >> nd.left >> nd.right >> nd.value >>
                  nd.gain >> nd.n_samples >> nd.cover))
                throw DataError("model file " + path + ": malformed node line");
            tree.nodes.push_back(nd);
        }
        return tree;
    }
};

}  // namespace

void save_model(const LogisticModel& model, std::ostream& out) {
    out << "churn-model logistic 1\n";
    write_names(model.names, out);
    for (std::size_t j = 0; j < model.d(); ++j)
        out << "standardize " << format_full(model.means[j]) << " " << format_full(model.stds[j])
            << "\n";
    for (std::size_t j = 0; j < model.d(); ++j)
        out << "weight " << format_full(model.weights[j]) << "\n";
    out << "bias " << format_full(model.bias) << "\n";
    out << "end\n";
}

void save_model(const TreeClassifier& model, std::ostream& out) {
    out << "churn-model tree 1\n";
    write_names(model.names, out);
    write_tree(model.tree, out);
    out << "end\n";
}

void save_model(const ForestClassifier& model, std::ostream& out) {
    out << "churn-model forest 1\n";
    write_names(model.names, out);
    const ForestConfig& c = model.forest.config;
    out << "config " << c.n_trees << " " << c.mtry << " " << c.max_depth << " "
        << c.min_samples_leaf << " " << c.seed << " " << (c.bootstrap ? 1 : 0) << "\n";
    out << "ntrees " << model.forest.trees.size() << "\n";
    for (const Tree& tree : model.forest.trees) write_tree(tree, out);
    out << "end\n";
}

void save_model(const GbtClassifier& model, std::ostream& out) {
    out << "churn-model gbt 1\n";
    write_names(model.names, out);
    const GbtParams& p = model.model.params;
    out << "param colsample_bylevel " << format_full(p.colsample_bylevel) << "\n";
    out << "param colsample_bytree " << format_full(p.colsample_bytree) << "\n";
    out << "param learning_rate " << format_full(p.learning_rate) << "\n";
    out << "param gamma " << format_full(p.gamma) << "\n";
    out << "param max_depth " << p.max_depth << "\n";
    out << "param max_delta_step " << format_full(p.max_delta_step) << "\n";
    out << "param min_child_weight " << format_full(p.min_child_weight) << "\n";
    out << "param n_estimators " << p.n_estimators << "\n";
    out << "param reg_lambda " << format_full(p.reg_lambda) << "\n";
    out << "param scale_pos_weight " << format_full(p.scale_pos_weight) << "\n";
    out << "param subsample " << format_full(p.subsample) << "\n";
    out << "param seed " << p.seed << "\n";
    out << "base_margin " << format_full(model.model.base_margin) << "\n";
    out << "ntrees " << model.model.trees.size() << "\n";
    for (const Tree& tree : model.model.trees) write_tree(tree, out);
    out << "end\n";
}

std::string model_to_string(const AnyModel& model) {
    std::ostringstream out;
    std::visit([&](const auto& m) { save_model(m, out); }, model);
    return out.str();
}

void save_model_file(const AnyModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write model file: " + path);
    out << model_to_string(model);
}

AnyModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path);
    Reader r{in, path, {}};
    std::string header = r.next_line();

    if (header == "churn-model logistic 1") {
        LogisticModel m;
        m.names = r.read_names();
        std::size_t d = m.names.size();
        m.means.resize(d);
        m.stds.resize(d);
        m.weights.resize(d);
        for (std::size_t j = 0; j < d; ++j) {
            std::istringstream ss(r.expect("standardize"));
            if (!(ss >> m.means[j] >> m.stds[j]))
                throw DataError("model file " + path + ": malformed standardize line");
        }
        for (std::size_t j = 0; j < d; ++j) m.weights[j] = r.expect_double("weight");
        m.bias = r.expect_double("bias");
        r.expect("end");
        return m;
    }
    if (header == "churn-model tree 1") {
        TreeClassifier m;
        m.names = r.read_names();
        m.tree = r.read_tree();
        r.expect("end");
        return m;
    }
    if (header == "churn-model forest 1") {
        ForestClassifier m;
        m.names = r.read_names();
        std::istringstream ss(r.expect("config"));
        ForestConfig& c = m.forest.config;
        int bootstrap = 1;
        if (!(ss >> c.n_trees >> c.mtry >> c.max_depth >> c.min_samples_leaf >> c.seed >>
              bootstrap))
            throw DataError("model file " + path + ": malformed config line");
        c.bootstrap = bootstrap != 0;
        auto n = static_cast<std::size_t>(r.expect_int("ntrees"));
        for (std::size_t t = 0; t < n; ++t) m.forest.trees.push_back(r.read_tree());
        r.expect("end");
        return m;
    }
    if (header == "churn-model gbt 1") {
        GbtClassifier m;
        m.names = r.read_names();
        GbtParams& p = m.model.params;
        auto param = [&](const std::string& name) {
            std::string rest = r.expect("param");
            if (rest.rfind(name + " ", 0) != 0)
                throw DataError("model file " + path + ": expected param " + name);
            return rest.substr(name.size() + 1);
        };
        p.colsample_bylevel = std::stod(param("colsample_bylevel"));
        p.colsample_bytree = std::stod(param("colsample_bytree"));
        p.learning_rate = std::stod(param("learning_rate"));
        p.gamma = std::stod(param("gamma"));
        p.max_depth = static_cast<std::size_t>(std::stoll(param("max_depth")));
        p.max_delta_step = std::stod(param("max_delta_step"));
        p.min_child_weight = std::stod(param("min_child_weight"));
        p.n_estimators = static_cast<std::size_t>(std::stoll(param("n_estimators")));
        p.reg_lambda = std::stod(param("reg_lambda"));
        p.scale_pos_weight = std::stod(param("scale_pos_weight"));
        p.subsample = std::stod(param("subsample"));
        p.seed = static_cast<std::uint64_t>(std::stoull(param("seed")));
        m.model.base_margin = r.expect_double("base_margin");
        auto n = static_cast<std::size_t>(r.expect_int("ntrees"));
        for (std::size_t t = 0; t < n; ++t) m.model.trees.push_back(r.read_tree());
        m.model.d = m.names.size();
        r.expect("end");
        return m;
    }
    throw DataError("unrecognized model file header in " + path + ": " + header);
}

std::string model_kind(const AnyModel& model) {
    struct Visitor {
        std::string operator()(const LogisticModel&) const { return "logistic"; }
        std::string operator()(const TreeClassifier&) const { return "tree"; }
        std::string operator()(const ForestClassifier&) const { return "forest"; }
        std::string operator()(const GbtClassifier&) const { return "gbt"; }
    };
    return std::visit(Visitor{}, model);
}

const std::vector<std::string>& model_feature_names(const AnyModel& model) {
    struct Visitor {
        const std::vector<std::string>& operator()(const LogisticModel& m) const {
            return m.names;
        }
        const std::vector<std::string>& operator()(const TreeClassifier& m) const {
            return m.names;
        }
        const std::vector<std::string>& operator()(const ForestClassifier& m) const {
            return m.names;
        }
        const std::vector<std::string>& operator()(const GbtClassifier& m) const {
            return m.names;
        }
    };
    return std::visit(Visitor{}, model);
}

}  // namespace churn
