// Python bindings for the core operations: schema validation, learner
// training, fusion, membership search, metrics, data generation, and the
// full experiment runner.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <json.hpp>

#include "drscreen/classifiers.hpp"
#include "drscreen/config.hpp"
#include "drscreen/dataio.hpp"
#include "drscreen/fusion.hpp"
#include "drscreen/harness.hpp"
#include "drscreen/metrics.hpp"
#include "drscreen/selection.hpp"

namespace py = pybind11;
using namespace drscreen;

namespace {

Strategy strategy_from(const std::string& name) {
    const auto s = parse_strategy(name);
    if (!s) throw ConfigError("unknown fusion strategy '" + name + "'");
    return *s;
}

EnergyKind energy_from(const std::string& name) {
    const auto e = parse_energy(name);
    if (!e) throw ConfigError("unknown energy '" + name + "'");
    return *e;
}

std::vector<DiscriminatorScores> rows_from(const std::vector<std::vector<double>>& rows) {
    std::vector<DiscriminatorScores> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.emplace_back(r);
    return out;
}

LabeledDataset dataset_from(const std::vector<std::vector<double>>& features,
                            const std::vector<std::size_t>& labels, std::size_t num_classes) {
    LabeledDataset data;
    data.num_classes = num_classes;
    data.features.reserve(features.size());
    for (const auto& row : features) data.features.push_back(validate_feature_vector(row));
    data.labels = labels;
    return data;
}

FusionPolicy policy_from(const std::string& strategy,
                         const std::optional<std::vector<double>>& weights, double epsilon) {
    FusionPolicy policy;
    policy.strategy = strategy_from(strategy);
    policy.pool_weights = weights;
    policy.product_epsilon = epsilon;
    return policy;
}

py::dict search_result_dict(const SearchResult& r) {
    py::dict out;
    out["selected"] = r.selected;
    out["energy"] = r.energy;
    out["initial_energy"] = r.initial_energy;
    py::list trace;
    for (const SearchStep& s : r.trace) {
        trace.append(py::make_tuple(s.candidate, s.energy, s.accepted));
    }
    out["trace"] = trace;
    return out;
}

// Value handle around the immutable model (pybind holders cannot carry
// shared_ptr-to-const directly).
struct PyClassifier {
    ClassifierPtr model;
};

std::vector<ClassifierPtr> unwrap_pool(const std::vector<PyClassifier>& pool) {
    std::vector<ClassifierPtr> out;
    out.reserve(pool.size());
    for (const PyClassifier& c : pool) out.push_back(c.model);
    return out;
}

}  // namespace

PYBIND11_MODULE(_drscreen, m) {
    m.doc() = "ensemble fusion and greedy membership selection over screening feature tables";

    py::register_exception<Error>(m, "Error");

    m.def("feature_count", [] { return kFeatureCount; });

    m.def(
        "validate_feature_vector",
        [](const std::vector<double>& raw) {
            const FeatureVector v = validate_feature_vector(raw);
            return std::vector<double>(v.begin(), v.end());
        },
        py::arg("values"), "Checks the 19-feature schema and returns the vector.");

    py::class_<PyClassifier>(m, "Classifier")
        .def_property_readonly("name",
                               [](const PyClassifier& c) { return c.model->name(); })
        .def_property_readonly("num_classes",
                               [](const PyClassifier& c) { return c.model->num_classes(); })
        .def(
            "score",
            [](const PyClassifier& c, const std::vector<double>& x) {
                return c.model->score(validate_feature_vector(x)).values();
            },
            py::arg("x"))
        .def(
            "decide",
            [](const PyClassifier& c, const std::vector<double>& x) {
                return decide(*c.model, validate_feature_vector(x));
            },
            py::arg("x"));

    m.def(
        "train",
        [](const std::string& kind, const std::map<std::string, double>& params,
           const std::vector<std::vector<double>>& features,
           const std::vector<std::size_t>& labels, std::size_t num_classes) {
            return PyClassifier{train(make_learner_spec(kind, params),
                                      dataset_from(features, labels, num_classes))};
        },
        py::arg("kind"), py::arg("params"), py::arg("features"), py::arg("labels"),
        py::arg("num_classes") = 2,
        "Trains a reference learner: knn, naive_bayes, decision_tree, random_forest or "
        "adaboost.");

    m.def(
        "fuse",
        [](const std::string& strategy, const std::vector<std::vector<double>>& rows,
           const std::optional<std::vector<double>>& weights, double product_epsilon) {
            const auto r = rows_from(rows);
            return fuse_rows(strategy_from(strategy), r,
                             weights ? &*weights : nullptr, product_epsilon);
        },
        py::arg("strategy"), py::arg("rows"), py::arg("weights") = std::nullopt,
        py::arg("product_epsilon") = 0.0,
        "Fused decision over one sample's per-member discriminator rows.");

    m.def(
        "fuse_positive_score",
        [](const std::string& strategy, const std::vector<std::vector<double>>& rows,
           std::size_t positive, const std::optional<std::vector<double>>& weights,
           double product_epsilon) {
            const auto r = rows_from(rows);
            return fuse_positive_rows(strategy_from(strategy), r, positive,
                                      weights ? &*weights : nullptr, product_epsilon);
        },
        py::arg("strategy"), py::arg("rows"), py::arg("positive") = 1,
        py::arg("weights") = std::nullopt, py::arg("product_epsilon") = 0.0);

    m.def(
        "energy",
        [](const std::string& kind, const std::vector<std::size_t>& predictions,
           const std::vector<std::size_t>& truth) {
            return energy(energy_from(kind), predictions, truth);
        },
        py::arg("kind"), py::arg("predictions"), py::arg("truth"));

    py::class_<ConfusionCounts>(m, "ConfusionCounts")
        .def_readonly("tp", &ConfusionCounts::tp)
        .def_readonly("fp", &ConfusionCounts::fp)
        .def_readonly("tn", &ConfusionCounts::tn)
        .def_readonly("fn", &ConfusionCounts::fn);

    m.def(
        "confusion",
        [](const std::vector<std::size_t>& predictions, const std::vector<std::size_t>& truth,
           std::size_t positive) { return confusion(predictions, truth, positive); },
        py::arg("predictions"), py::arg("truth"), py::arg("positive") = 1);
    m.def("sensitivity", &sensitivity);
    m.def("specificity", &specificity);
    m.def("accuracy", &accuracy);
    m.def("f_score", &f_score);

    m.def(
        "roc_auc",
        [](const std::vector<double>& scores, const std::vector<std::size_t>& truth,
           std::size_t positive) {
            const RocCurve curve = roc_auc(scores, truth, positive);
            py::dict out;
            out["points"] = curve.points;
            out["auc"] = curve.auc;
            return out;
        },
        py::arg("scores"), py::arg("truth"), py::arg("positive") = 1);

    m.def(
        "generate_synthetic",
        [](std::size_t n, const std::array<double, kGradeCount>& proportions, double separation,
           std::uint64_t seed) {
            const Dataset data = generate_synthetic({n, proportions, separation, seed});
            std::vector<std::vector<double>> features;
            std::vector<int> grades;
            features.reserve(data.records.size());
            for (const auto& r : data.records) {
                features.emplace_back(r.features.begin(), r.features.end());
                grades.push_back(static_cast<int>(r.grade));
            }
            return py::make_tuple(features, grades);
        },
        py::arg("n"), py::arg("proportions"), py::arg("separation"), py::arg("seed"));

    m.def(
        "apply_scenario",
        [](const std::vector<std::vector<double>>& features, const std::vector<int>& grades,
           const std::string& scenario) {
            const auto parsed = parse_scenario(scenario);
            if (!parsed) throw ConfigError("unknown scenario '" + scenario + "'");
            Dataset data;
            for (std::size_t i = 0; i < features.size(); ++i) {
                if (grades[i] < 0 || grades[i] > 3) throw RangeError("grade outside 0..3");
                data.records.push_back(
                    {validate_feature_vector(features[i]), static_cast<Grade>(grades[i])});
            }
            const ScenarioDataset out = apply_scenario(data, *parsed);
            std::vector<std::vector<double>> kept;
            kept.reserve(out.data.size());
            for (const auto& f : out.data.features) kept.emplace_back(f.begin(), f.end());
            return py::make_tuple(kept, out.data.labels, out.source_rows);
        },
        py::arg("features"), py::arg("grades"), py::arg("scenario"));

    m.def(
        "stratified_kfold",
        [](const std::vector<std::size_t>& labels, std::size_t k, std::uint64_t seed) {
            return stratified_kfold(labels, k, seed).assignment;
        },
        py::arg("labels"), py::arg("k"), py::arg("seed") = 0,
        "Fold index per sample; folds partition the data, per-class counts differ by <= 1.");

    m.def(
        "search",
        [](const std::string& method, const std::vector<PyClassifier>& pool,
           const std::string& strategy, const std::string& energy_kind,
           const std::vector<std::vector<double>>& features,
           const std::vector<std::size_t>& truth,
           const std::optional<std::vector<double>>& weights, double product_epsilon) {
            const auto parsed = parse_search(method);
            if (!parsed) throw ConfigError("unknown search method '" + method + "'");
            std::vector<FeatureVector> xs;
            xs.reserve(features.size());
            for (const auto& f : features) xs.push_back(validate_feature_vector(f));
            const auto members = unwrap_pool(pool);
            const MemberScores scores(members, xs);
            return search_result_dict(run_search(*parsed, scores,
                                                 policy_from(strategy, weights, product_epsilon),
                                                 energy_from(energy_kind), truth));
        },
        py::arg("method"), py::arg("pool"), py::arg("strategy"), py::arg("energy"),
        py::arg("features"), py::arg("truth"), py::arg("weights") = std::nullopt,
        py::arg("product_epsilon") = 0.0,
        "Runs forward/backward/all/single_best membership selection.");

    m.def(
        "run_experiment",
        [](const std::string& config_json, std::size_t threads) {
            nlohmann::json doc;
            try {
                doc = nlohmann::json::parse(config_json);
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError(std::string("config parse error: ") + e.what());
            }
            ExperimentConfig config = parse_config(doc);
            config.threads = threads;
            const EvaluationReport report = run_experiment(config);
            emit_report(report, config);
            return config.out_dir.string();
        },
        py::arg("config_json"), py::arg("threads") = 0,
        "Runs the configured experiment grid and writes the report files; returns out_dir.");
}
