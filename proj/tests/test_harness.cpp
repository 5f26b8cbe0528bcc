#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "drscreen/config.hpp"
#include "drscreen/harness.hpp"
#include "drscreen/textio.hpp"

using namespace drscreen;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("drscreen_harness_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

ExperimentConfig base_config(const fs::path& out_dir) {
    ExperimentConfig config;
    SynthParams synth;
    synth.n = 240;
    synth.separation = 4.0;
    synth.seed = 5;
    config.data = synth;
    config.scenario = Scenario::NoDrVsDr;
    config.pool = {
        make_learner_spec("knn", {{"k", 5}}),
        make_learner_spec("naive_bayes"),
        make_learner_spec("decision_tree", {{"max_depth", 6}}),
    };
    config.strategies = {Strategy::Maj, Strategy::Avg};
    config.energies = {EnergyKind::Accuracy};
    config.searches = {SearchMethod::Forward, SearchMethod::Backward};
    config.k = 4;
    config.seed = 19;
    config.out_dir = out_dir;
    return config;
}

}  // namespace

TEST_CASE("single-member single-best pipeline equals direct cross-validation") {
    ExperimentConfig config = base_config(fresh_dir("degenerate"));
    config.pool = {make_learner_spec("decision_tree", {{"max_depth", 6}})};
    config.strategies = {Strategy::Avg};
    config.searches = {SearchMethod::SingleBest};
    config.energy_on = EnergyOn::Train;

    const EvaluationReport report = run_experiment(config);
    REQUIRE(report.cells.size() == 1);
    const CellResult& cell = report.cells.front();

    // Direct oracle: train the same learner per fold, predict the test fold.
    const Dataset dataset = generate_synthetic(std::get<SynthParams>(config.data));
    const ScenarioDataset scenario = apply_scenario(dataset, config.scenario);
    const FoldPlan plan = stratified_kfold(scenario.data.labels, config.k, config.seed);
    REQUIRE(plan.assignment == report.folds.assignment);
    for (std::size_t f = 0; f < config.k; ++f) {
        LabeledDataset fit;
        fit.num_classes = 2;
        for (const std::size_t i : plan.train_indices(f)) {
            fit.features.push_back(scenario.data.features[i]);
            fit.labels.push_back(scenario.data.labels[i]);
        }
        const auto model = train(config.pool[0], fit);
        const auto test = plan.test_indices(f);
        REQUIRE(cell.folds[f].selected == std::vector<std::size_t>{0});
        REQUIRE(cell.folds[f].predictions.size() == test.size());
        for (std::size_t j = 0; j < test.size(); ++j) {
            CHECK(cell.folds[f].predictions[j] ==
                  decide(*model, scenario.data.features[test[j]]));
        }
    }
}

TEST_CASE("reports are deterministic and thread-count independent") {
    const fs::path dir = fresh_dir("determinism");
    ExperimentConfig config = base_config(dir);

    config.threads = 1;
    emit_report(run_experiment(config), config);
    const std::string manifest_once = slurp(manifest_path(dir));
    const std::string grid_once = slurp(grid_txt_path(dir, SearchMethod::Backward));

    config.threads = 0;  // default worker count
    emit_report(run_experiment(config), config);
    CHECK(slurp(manifest_path(dir)) == manifest_once);
    CHECK(slurp(grid_txt_path(dir, SearchMethod::Backward)) == grid_once);
    fs::remove_all(dir);
}

TEST_CASE("full grid produces the expected cell lattice and files") {
    const fs::path dir = fresh_dir("grid");
    ExperimentConfig config = base_config(dir);
    config.strategies.assign(kAllStrategies.begin(), kAllStrategies.end());
    config.energies.assign(kAllEnergies.begin(), kAllEnergies.end());

    const EvaluationReport report = run_experiment(config);
    CHECK(report.cells.size() == 2 * 6 * 3);
    std::set<std::string> seen;
    for (const CellResult& cell : report.cells) {
        seen.insert(std::string(search_name(cell.search)) + "/" +
                    std::string(strategy_name(cell.strategy)) + "/" +
                    std::string(energy_name(cell.energy)));
        CHECK(cell.folds.size() == config.k);
        CHECK(cell.roc.points.front() == std::array<double, 2>{0.0, 0.0});
        CHECK(cell.roc.points.back() == std::array<double, 2>{1.0, 1.0});
    }
    CHECK(seen.size() == 36);

    emit_report(report, config);
    for (const SearchMethod s : config.searches) {
        CHECK(fs::exists(grid_txt_path(dir, s)));
        CHECK(fs::exists(grid_csv_path(dir, s)));
        // 6 strategy rows in the txt grid
        std::istringstream grid(slurp(grid_txt_path(dir, s)));
        std::string line;
        std::size_t strategy_rows = 0;
        while (std::getline(grid, line)) {
            for (const Strategy st : kAllStrategies) {
                if (line.rfind(std::string(strategy_name(st)) + " |", 0) == 0) ++strategy_rows;
            }
        }
        CHECK(strategy_rows == 6);
    }
    CHECK(fs::exists(comparison_path(dir)));
    for (const CellResult& cell : report.cells) {
        CHECK(fs::exists(roc_path(dir, cell.search, cell.strategy, cell.energy)));
    }
    fs::remove_all(dir);
}

TEST_CASE("manifest recomputes to the reported values and shows no leakage") {
    const fs::path dir = fresh_dir("manifest");
    ExperimentConfig config = base_config(dir);
    const EvaluationReport report = run_experiment(config);
    emit_report(report, config);

    const json m = json::parse(slurp(manifest_path(dir)));
    const auto labels = m["labels"].get<std::vector<ClassLabel>>();

    // Split audit: fit and energy data never touch the test fold, and the
    // test folds partition the samples.
    std::set<std::size_t> all_test;
    for (const auto& split : m["splits"]) {
        const auto fit = split["fit"].get<std::set<std::size_t>>();
        const auto energy_eval = split["energy"].get<std::set<std::size_t>>();
        const auto test = split["test"].get<std::set<std::size_t>>();
        for (const std::size_t i : test) {
            CHECK_FALSE(fit.count(i));
            CHECK_FALSE(energy_eval.count(i));
            CHECK(all_test.insert(i).second);
        }
        for (const std::size_t i : energy_eval) CHECK_FALSE(fit.count(i));  // val slice policy
    }
    CHECK(all_test.size() == labels.size());

    for (const auto& cell : m["cells"]) {
        double sum_sn = 0, sum_sp = 0, sum_acc = 0;
        std::vector<double> pooled_scores;
        std::vector<ClassLabel> pooled_truth;
        for (const auto& fold : cell["folds"]) {
            const auto test =
                m["splits"][fold["fold"].get<std::size_t>()]["test"].get<std::vector<std::size_t>>();
            const auto preds = fold["predictions"].get<std::vector<ClassLabel>>();
            REQUIRE(preds.size() == test.size());
            std::vector<ClassLabel> truth;
            for (const std::size_t i : test) truth.push_back(labels[i]);
            const ConfusionCounts c = confusion(preds, truth, 1);
            CHECK(c.tp == fold["tp"].get<std::size_t>());
            CHECK(c.fp == fold["fp"].get<std::size_t>());
            CHECK(c.tn == fold["tn"].get<std::size_t>());
            CHECK(c.fn == fold["fn"].get<std::size_t>());
            CHECK(sensitivity(c) == fold["sensitivity"].get<double>());
            CHECK(specificity(c) == fold["specificity"].get<double>());
            CHECK(accuracy(c) == fold["accuracy"].get<double>());
            sum_sn += sensitivity(c);
            sum_sp += specificity(c);
            sum_acc += accuracy(c);
            const auto scores = fold["scores"].get<std::vector<double>>();
            pooled_scores.insert(pooled_scores.end(), scores.begin(), scores.end());
            pooled_truth.insert(pooled_truth.end(), truth.begin(), truth.end());
        }
        const double k = static_cast<double>(config.k);
        CHECK(sum_sn / k == cell["mean_sensitivity"].get<double>());
        CHECK(sum_sp / k == cell["mean_specificity"].get<double>());
        CHECK(sum_acc / k == cell["mean_accuracy"].get<double>());
        CHECK(roc_auc(pooled_scores, pooled_truth).auc == cell["auc"].get<double>());
    }

    // The comparison table holds exactly the manifest's cell values.
    std::istringstream comparison(slurp(comparison_path(dir)));
    std::string line;
    std::getline(comparison, line);  // header
    for (const auto& cell : m["cells"]) {
        REQUIRE(std::getline(comparison, line));
        std::ostringstream want;
        want << cell["search"].get<std::string>() << ',' << cell["strategy"].get<std::string>()
             << ',' << cell["energy"].get<std::string>() << ','
             << format_double(cell["mean_sensitivity"].get<double>()) << ','
             << format_double(cell["mean_specificity"].get<double>()) << ','
             << format_double(cell["mean_accuracy"].get<double>()) << ','
             << format_double(cell["auc"].get<double>());
        CHECK(line == want.str());
    }
    fs::remove_all(dir);
}

TEST_CASE("well-separated synthetic data pushes a plain tree above 0.95") {
    // Frozen from a prior run of this exact configuration: the tree's mean
    // CV accuracy lands near 0.99 at separation 5.
    ExperimentConfig config = base_config(fresh_dir("tree"));
    SynthParams synth;
    synth.n = 1200;
    synth.separation = 5.0;
    synth.seed = 77;
    config.data = synth;
    config.pool = {make_learner_spec("decision_tree", {{"max_depth", 8}})};
    config.strategies = {Strategy::Avg};
    config.searches = {SearchMethod::SingleBest};
    config.k = 10;
    const EvaluationReport report = run_experiment(config);
    CHECK(report.cells.front().mean_accuracy >= 0.95);
}

TEST_CASE("a fold failure names the fold") {
    ExperimentConfig config = base_config(fresh_dir("folderr"));
    // Two positive records total: each training portion keeps exactly one,
    // far too few to carve a validation slice from.
    Dataset d;
    FeatureVector x{};
    x[0] = 0.5;
    for (int i = 0; i < 20; ++i) {
        x[2] = static_cast<double>(i);
        d.records.push_back({x, i < 2 ? Grade::R1 : Grade::R0});
    }
    const fs::path csv = fs::temp_directory_path() / "drscreen_harness_folderr.csv";
    write_csv(d, csv);
    config.data = csv;
    config.k = 2;
    config.energy_on = EnergyOn::Val;
    try {
        run_experiment(config);
        FAIL("expected FoldError");
    } catch (const FoldError& e) {
        CHECK(std::string(e.what()).find("fold 0") != std::string::npos);
    }
    fs::remove(csv);
}
