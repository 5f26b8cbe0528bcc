// Acceptance suite: one pass/fail line per criterion, non-zero exit when
// any criterion fails. Each criterion is self-contained and uses the
// brute-force oracles from oracles.hpp where an independent check is
// required.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "drscreen/config.hpp"
#include "drscreen/harness.hpp"
#include "drscreen/rng.hpp"
#include "oracles.hpp"

using namespace drscreen;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Criterion {
    std::vector<std::string> problems;
    long long checks = 0;

    void check(bool ok, const std::string& message) {
        ++checks;
        if (!ok && problems.size() < 8) problems.push_back(message);
        if (!ok && problems.size() == 8) problems.push_back("(further problems suppressed)");
    }
};

int g_failures = 0;

void run_criterion(const std::string& name, double time_limit_seconds,
                   const std::function<void(Criterion&)>& body) {
    Criterion c;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.check(false, std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (time_limit_seconds > 0) {
        c.check(elapsed < time_limit_seconds,
                "runtime " + std::to_string(elapsed) + "s exceeds " +
                    std::to_string(time_limit_seconds) + "s");
    }
    const bool ok = c.problems.empty();
    if (!ok) ++g_failures;
    std::printf("[%s] %s (%lld checks, %.2fs)\n", ok ? "PASS" : "FAIL", name.c_str(), c.checks,
                elapsed);
    for (const std::string& p : c.problems) std::printf("       - %s\n", p.c_str());
    std::fflush(stdout);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("drscreen_acceptance_" + name);
    fs::remove_all(dir);
    return dir;
}

DiscriminatorScores binary_row(double p0) { return DiscriminatorScores({p0, 1.0 - p0}); }

// ---------------------------------------------------------------------------

void fusion_oracle_equivalence(Criterion& c) {
    const std::vector<double> grid = {0.0, 0.25, 0.5, 0.75, 1.0};
    const char* names[] = {"maj", "wmaj", "avg", "pro", "min", "max"};

    std::vector<DiscriminatorScores> rows;
    std::vector<std::vector<double>> raw;
    std::function<void(std::size_t)> enumerate = [&](std::size_t remaining) {
        if (remaining == 0) {
            // Non-weighted strategies.
            for (std::size_t s = 0; s < kAllStrategies.size(); ++s) {
                if (kAllStrategies[s] == Strategy::WMaj) continue;
                const ClassLabel got = fuse_rows(kAllStrategies[s], rows);
                const ClassLabel want = oracle::fuse(names[s], raw);
                c.check(got == want, std::string("decision mismatch for ") + names[s]);
                const double score = fuse_positive_rows(kAllStrategies[s], rows, 1);
                const double want_score = oracle::positive_score(names[s], raw, 1);
                c.check(std::abs(score - want_score) <= 1e-12,
                        std::string("score mismatch for ") + names[s]);
            }
            // Weighted majority over the weight grid.
            std::vector<double> weights(rows.size());
            std::function<void(std::size_t, bool)> weight_loop = [&](std::size_t i,
                                                                     bool any_positive) {
                if (i == weights.size()) {
                    if (!any_positive) return;
                    const ClassLabel got = fuse_rows(Strategy::WMaj, rows, &weights);
                    const ClassLabel want = oracle::fuse("wmaj", raw, weights);
                    c.check(got == want, "decision mismatch for wmaj");
                    const double score = fuse_positive_rows(Strategy::WMaj, rows, 1, &weights);
                    const double want_score = oracle::positive_score("wmaj", raw, 1, weights);
                    c.check(std::abs(score - want_score) <= 1e-12, "score mismatch for wmaj");
                    return;
                }
                for (const double w : grid) {
                    weights[i] = w;
                    weight_loop(i + 1, any_positive || w > 0.0);
                }
            };
            weight_loop(0, false);
            return;
        }
        for (const double p : grid) {
            rows.push_back(binary_row(p));
            raw.push_back(rows.back().values());
            enumerate(remaining - 1);
            rows.pop_back();
            raw.pop_back();
        }
    };
    for (std::size_t ensemble_size = 1; ensemble_size <= 3; ++ensemble_size) {
        enumerate(ensemble_size);
    }
}

// ---------------------------------------------------------------------------

struct SearchFixture {
    std::vector<std::vector<DiscriminatorScores>> rows;  // [member][sample]
    std::vector<ClassLabel> truth;
};

SearchFixture deterministic_pool(std::size_t members, std::uint64_t seed) {
    // 200-sample synthetic set; members are seeded corruptions of the truth.
    SynthParams params;
    params.n = 200;
    params.separation = 2.0;
    params.seed = seed;
    const ScenarioDataset scenario =
        apply_scenario(generate_synthetic(params), Scenario::NoDrVsDr);
    SearchFixture f;
    f.truth = scenario.data.labels;
    Rng rng(mix_seed(seed, 0xf1c));
    f.rows.resize(members);
    for (std::size_t m = 0; m < members; ++m) {
        const double error_rate = 0.06 + 0.06 * static_cast<double>(m);
        for (std::size_t s = 0; s < f.truth.size(); ++s) {
            const ClassLabel vote =
                uniform01(rng) < error_rate ? 1 - f.truth[s] : f.truth[s];
            const double confidence = 0.55 + 0.4 * uniform01(rng);
            std::vector<double> row(2, 0.0);
            row[vote] = confidence;
            row[1 - vote] = 1.0 - confidence;
            f.rows[m].push_back(DiscriminatorScores(std::move(row)));
        }
    }
    return f;
}

void search_fidelity(Criterion& c) {
    const char* strategy_names[] = {"maj", "wmaj", "avg", "pro", "min", "max"};
    const char* kind_names[] = {"sensitivity", "accuracy", "fscore"};

    for (const std::size_t pool_size : {std::size_t{3}, std::size_t{8}}) {
        const SearchFixture f = deterministic_pool(pool_size, 404 + pool_size);
        const MemberScores scores = MemberScores::from_rows(f.rows);

        for (std::size_t si = 0; si < kAllStrategies.size(); ++si) {
            const Strategy strategy = kAllStrategies[si];
            for (std::size_t ki = 0; ki < kAllEnergies.size(); ++ki) {
                const EnergyKind kind = kAllEnergies[ki];

                FusionPolicy policy{strategy, std::nullopt, 0.0};
                std::vector<double> pool_weights;
                if (strategy == Strategy::WMaj) {
                    const FusionPolicy neutral{Strategy::Avg, std::nullopt, 0.0};
                    pool_weights = normalized_weights(
                        member_energies(scores, neutral, kind, f.truth));
                    policy.pool_weights = pool_weights;
                }

                // Fully oracle-side subset energy.
                const oracle::SubsetEnergy E = [&](const std::set<std::size_t>& subset) {
                    std::vector<std::size_t> preds;
                    for (std::size_t s = 0; s < f.truth.size(); ++s) {
                        std::vector<std::vector<double>> raw;
                        std::vector<double> weights;
                        for (const std::size_t m : subset) {
                            raw.push_back(f.rows[m][s].values());
                            if (!pool_weights.empty()) weights.push_back(pool_weights[m]);
                        }
                        preds.push_back(oracle::fuse(strategy_names[si], raw, weights));
                    }
                    return oracle::energy(kind_names[ki], preds, f.truth);
                };

                const SearchResult fwd = forward_search(scores, policy, kind, f.truth);
                const auto fwd_replay = oracle::forward_replay(pool_size, E);
                c.check(std::set<std::size_t>(fwd.selected.begin(), fwd.selected.end()) ==
                            fwd_replay.selected,
                        "forward selection mismatch");
                c.check(fwd.energy == fwd_replay.energy, "forward energy mismatch");

                const SearchResult bwd = backward_search(scores, policy, kind, f.truth);
                const auto bwd_replay = oracle::backward_replay(pool_size, E);
                c.check(std::set<std::size_t>(bwd.selected.begin(), bwd.selected.end()) ==
                            bwd_replay.selected,
                        "backward selection mismatch");
                c.check(bwd.energy == bwd_replay.energy, "backward energy mismatch");

                const auto singles = member_energies(scores, policy, kind, f.truth);
                c.check(fwd.energy >= *std::max_element(singles.begin(), singles.end()),
                        "forward energy below the best singleton");
                c.check(bwd.energy >= bwd.initial_energy,
                        "backward energy below the full pool");

                const double optimum = oracle::exhaustive_best(pool_size, E);
                c.check(fwd.energy <= optimum, "forward energy above the global optimum");
                c.check(bwd.energy <= optimum, "backward energy above the global optimum");
            }
        }
    }
}

// ---------------------------------------------------------------------------

void metric_identities(Criterion& c) {
    c.check(sensitivity({9, 0, 0, 1}) == 0.9, "sensitivity 9/10");
    c.check(accuracy({5, 0, 5, 0}) == 1.0, "perfect accuracy");
    c.check(f_score({4, 2, 0, 2}) == 2.0 / 3.0, "f-score 8/12");
    c.check(specificity({0, 9, 91, 0}) == 0.91, "specificity 91/100");
    c.check(specificity({1, 0, 0, 0}) == 0.0, "specificity zero-denominator convention");
    c.check(sensitivity({0, 2, 2, 0}) == 0.0, "sensitivity zero-denominator convention");

    Rng rng(915);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + uniform_below(rng, 60);
        std::vector<ClassLabel> preds(n), truth(n), preds_inv(n), truth_inv(n);
        for (std::size_t i = 0; i < n; ++i) {
            preds[i] = uniform_below(rng, 2);
            truth[i] = uniform_below(rng, 2);
            preds_inv[i] = 1 - preds[i];
            truth_inv[i] = 1 - truth[i];
        }
        const ConfusionCounts a = confusion(preds, truth, 1);
        const ConfusionCounts b = confusion(preds_inv, truth_inv, 1);
        c.check(sensitivity(b) == specificity(a), "label inversion swaps Sn and Sp");
        c.check(specificity(b) == sensitivity(a), "label inversion swaps Sp and Sn");
        c.check(energy(EnergyKind::Sensitivity, preds, truth) == sensitivity(a),
                "energy agrees with the metric bit-for-bit");
        c.check(energy(EnergyKind::Accuracy, preds, truth) == accuracy(a),
                "accuracy energy agrees bit-for-bit");
        c.check(energy(EnergyKind::FScore, preds, truth) == f_score(a),
                "f-score energy agrees bit-for-bit");
    }
}

// ---------------------------------------------------------------------------

void auc_properties(Criterion& c) {
    {
        const std::vector<double> s = {0.9, 0.8, 0.7, 0.2, 0.1};
        const std::vector<ClassLabel> t = {1, 1, 1, 0, 0};
        c.check(roc_auc(s, t).auc == 1.0, "perfect separation is exactly 1");
    }
    {
        const std::vector<double> s(8, 0.3);
        const std::vector<ClassLabel> t = {1, 1, 1, 1, 0, 0, 0, 0};
        c.check(roc_auc(s, t).auc == 0.5, "all ties are exactly 0.5");
    }
    {
        const std::vector<double> s = {0.9, 0.4, 0.8, 0.2};
        const std::vector<ClassLabel> t = {1, 1, 0, 0};
        c.check(roc_auc(s, t).auc == 0.75, "two-pair hand case is exactly 0.75");
    }
    Rng rng(2718);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 4 + uniform_below(rng, 50);
        std::vector<double> s(n);
        std::vector<ClassLabel> t(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = static_cast<double>(uniform_below(rng, 6)) / 5.0;
            t[i] = uniform_below(rng, 2);
        }
        t[0] = 1;
        t[1] = 0;
        const double base = roc_auc(s, t).auc;
        c.check(base == oracle::auc_pairs(s, t), "pair-enumeration oracle parity");

        std::vector<double> monotone(n);
        for (std::size_t i = 0; i < n; ++i) monotone[i] = std::exp(1.7 * s[i]) + 3.0;
        c.check(std::abs(roc_auc(monotone, t).auc - base) <= 1e-12,
                "strict monotone transform drift");

        std::vector<ClassLabel> flipped(n);
        for (std::size_t i = 0; i < n; ++i) flipped[i] = 1 - t[i];
        c.check(std::abs(roc_auc(s, flipped).auc - (1.0 - base)) <= 1e-12,
                "label flip complement drift");
    }
}

// ---------------------------------------------------------------------------

void cv_integrity(Criterion& c) {
    SynthParams params;
    params.n = 1200;
    params.seed = 55;
    params.separation = 3.0;
    const ScenarioDataset scenario =
        apply_scenario(generate_synthetic(params), Scenario::NoDrVsDr);
    const FoldPlan plan = stratified_kfold(scenario.data.labels, 10, 99);

    c.check(plan.assignment.size() == 1200, "every sample is assigned");
    std::vector<std::vector<std::size_t>> per_fold_class(10, std::vector<std::size_t>(2, 0));
    for (std::size_t i = 0; i < plan.assignment.size(); ++i) {
        c.check(plan.assignment[i] < 10, "fold index in range");
        per_fold_class[plan.assignment[i]][scenario.data.labels[i]] += 1;
    }
    for (std::size_t cls = 0; cls < 2; ++cls) {
        std::size_t lo = per_fold_class[0][cls], hi = per_fold_class[0][cls];
        for (std::size_t f = 1; f < 10; ++f) {
            lo = std::min(lo, per_fold_class[f][cls]);
            hi = std::max(hi, per_fold_class[f][cls]);
        }
        c.check(hi - lo <= 1, "per-class fold counts differ by at most one");
    }

    // Leakage audit straight from a run manifest.
    const fs::path dir = fresh_dir("cv");
    ExperimentConfig config;
    config.data = params;
    config.scenario = Scenario::NoDrVsDr;
    config.pool = {make_learner_spec("naive_bayes"),
                   make_learner_spec("decision_tree", {{"max_depth", 6}})};
    config.strategies = {Strategy::Avg};
    config.energies = {EnergyKind::Accuracy};
    config.searches = {SearchMethod::Forward};
    config.k = 10;
    config.seed = 99;
    config.out_dir = dir;
    emit_report(run_experiment(config), config);

    const json manifest = json::parse(slurp(manifest_path(dir)));
    std::set<std::size_t> all_test;
    for (const auto& split : manifest["splits"]) {
        const auto fit = split["fit"].get<std::set<std::size_t>>();
        const auto energy_eval = split["energy"].get<std::set<std::size_t>>();
        for (const std::size_t i : split["test"].get<std::vector<std::size_t>>()) {
            c.check(!fit.count(i), "test sample leaked into training");
            c.check(!energy_eval.count(i), "test sample leaked into energy evaluation");
            c.check(all_test.insert(i).second, "test folds overlap");
        }
    }
    c.check(all_test.size() == manifest["labels"].size(), "test folds cover every sample");
    fs::remove_all(dir);
}

// ---------------------------------------------------------------------------

// Mean accuracy of the best single classifier on this exact configuration,
// measured once with search=single_best and frozen here; the backward cell
// must stay within 0.02 of it.
constexpr double kFrozenSingleBestAccuracy = 0.9991666666666668;

ExperimentConfig desk_scale_config(const fs::path& dir) {
    ExperimentConfig config;
    SynthParams params;
    params.n = 1200;
    params.separation = 5.0;
    params.seed = 2024;
    config.data = params;
    config.scenario = Scenario::NoDrVsDr;
    config.pool = {
        make_learner_spec("knn", {{"k", 5}}),
        make_learner_spec("naive_bayes"),
        make_learner_spec("decision_tree", {{"max_depth", 8}}),
        make_learner_spec("random_forest", {{"n_trees", 25}, {"seed", 9}, {"max_depth", 8}}),
        make_learner_spec("adaboost", {{"n_rounds", 40}}),
    };
    config.strategies.assign(kAllStrategies.begin(), kAllStrategies.end());
    config.energies.assign(kAllEnergies.begin(), kAllEnergies.end());
    config.searches = {SearchMethod::Forward, SearchMethod::Backward};
    config.k = 10;
    config.seed = 7;
    config.out_dir = dir;
    return config;
}

void desk_scale_run(Criterion& c) {
    const fs::path dir = fresh_dir("desk");
    const ExperimentConfig config = desk_scale_config(dir);
    const EvaluationReport report = run_experiment(config);
    emit_report(report, config);

    c.check(report.cells.size() == 2 * 6 * 3, "full grid of cells");
    bool found = false;
    for (const CellResult& cell : report.cells) {
        if (cell.search == SearchMethod::Backward && cell.strategy == Strategy::Avg &&
            cell.energy == EnergyKind::Accuracy) {
            found = true;
            c.check(cell.mean_accuracy >= kFrozenSingleBestAccuracy - 0.02,
                    "backward+avg+accuracy accuracy below the single-best envelope");
            c.check(cell.mean_accuracy <= 1.0, "accuracy above one");
        }
    }
    c.check(found, "backward+avg+accuracy cell present");
    for (const SearchMethod s : config.searches) {
        c.check(fs::exists(grid_txt_path(dir, s)), "grid table emitted");
    }
    fs::remove_all(dir);
}

// ---------------------------------------------------------------------------

void report_shapes_and_product_collapse(Criterion& c) {
    // An externally supplied CSV (written by the generator, read back via
    // the path route) must yield complete grid and comparison reports.
    const fs::path dir = fresh_dir("shapes");
    const fs::path csv = fs::temp_directory_path() / "drscreen_acceptance_external.csv";
    {
        SynthParams params;
        params.n = 320;
        params.separation = 3.0;
        params.seed = 31337;
        write_csv(generate_synthetic(params), csv);
    }
    ExperimentConfig config;
    config.data = csv;
    config.scenario = Scenario::NoDrVsDr;
    config.pool = {make_learner_spec("knn", {{"k", 5}}), make_learner_spec("naive_bayes"),
                   make_learner_spec("decision_tree", {{"max_depth", 6}})};
    config.strategies.assign(kAllStrategies.begin(), kAllStrategies.end());
    config.energies.assign(kAllEnergies.begin(), kAllEnergies.end());
    config.searches = {SearchMethod::Forward, SearchMethod::Backward};
    config.k = 4;
    config.seed = 3;
    config.out_dir = dir;
    emit_report(run_experiment(config), config);

    for (const SearchMethod s : config.searches) {
        const std::string grid = slurp(grid_csv_path(dir, s));
        std::istringstream lines(grid);
        std::string line;
        std::getline(lines, line);
        c.check(line == "strategy,energy,sensitivity,specificity,accuracy,auc",
                "grid csv header");
        std::size_t rows = 0;
        while (std::getline(lines, line)) {
            if (!line.empty()) ++rows;
        }
        c.check(rows == 18, "grid csv holds the full 6x3 lattice");
    }
    {
        const std::string comparison = slurp(comparison_path(dir));
        std::istringstream lines(comparison);
        std::string line;
        std::getline(lines, line);
        c.check(line == "search,strategy,energy,sensitivity,specificity,accuracy,auc",
                "comparison header carries Sn/Sp/Acc/AUC");
        std::size_t rows = 0;
        while (std::getline(lines, line)) {
            if (!line.empty()) ++rows;
        }
        c.check(rows == 36, "comparison lists every cell");
    }
    const json manifest = json::parse(slurp(manifest_path(dir)));
    for (const auto& cell : manifest["cells"]) {
        const fs::path roc = roc_path(dir, *parse_search(cell["search"].get<std::string>()),
                                      *parse_strategy(cell["strategy"].get<std::string>()),
                                      *parse_energy(cell["energy"].get<std::string>()));
        const std::string points = slurp(roc);
        c.check(points.rfind("0,0\n", 0) == 0, "roc starts at (0,0)");
        c.check(points.find("\n1,1\n") != std::string::npos, "roc ends at (1,1)");
        c.check(points.find("# auc = ") != std::string::npos, "roc auc footer");
    }
    fs::remove_all(dir);
    fs::remove(csv);

    // Product-rule collapse: one member that never assigns mass to the
    // positive class drives the fused sensitivity to exactly zero.
    Rng rng(8088);
    std::vector<std::vector<DiscriminatorScores>> rows(2);
    std::vector<ClassLabel> truth;
    for (int s = 0; s < 120; ++s) {
        truth.push_back(uniform_below(rng, 2));
        rows[0].push_back(binary_row(1.0));  // positive class always gets zero
        rows[1].push_back(binary_row(0.1 + 0.8 * uniform01(rng)));
    }
    truth[0] = 1;
    truth[1] = 0;
    const MemberScores scores = MemberScores::from_rows(rows);
    const FusionPolicy policy{Strategy::Pro, std::nullopt, 0.0};
    const std::vector<std::size_t> both = {0, 1};
    const auto preds = fused_predictions(scores, both, policy);
    c.check(energy(EnergyKind::Sensitivity, preds, truth) == 0.0,
            "product fusion sensitivity is exactly zero under a veto member");
    const ConfusionCounts counts = confusion(preds, truth, 1);
    c.check(counts.tp == 0 && counts.fp == 0, "veto blocks every positive prediction");
}

// ---------------------------------------------------------------------------

void determinism(Criterion& c) {
    const fs::path dir = fresh_dir("determinism");
    ExperimentConfig config;
    SynthParams params;
    params.n = 240;
    params.separation = 4.0;
    params.seed = 12;
    config.data = params;
    config.scenario = Scenario::R0VsR1;
    config.pool = {make_learner_spec("knn", {{"k", 3}}), make_learner_spec("naive_bayes"),
                   make_learner_spec("adaboost", {{"n_rounds", 15}})};
    config.strategies.assign(kAllStrategies.begin(), kAllStrategies.end());
    config.energies.assign(kAllEnergies.begin(), kAllEnergies.end());
    config.searches = {SearchMethod::Forward, SearchMethod::Backward};
    config.k = 4;
    config.seed = 21;
    config.out_dir = dir;

    emit_report(run_experiment(config), config);
    const std::string manifest = slurp(manifest_path(dir));
    const std::string grid = slurp(grid_txt_path(dir, SearchMethod::Backward));
    const std::string comparison = slurp(comparison_path(dir));
    const std::string roc =
        slurp(roc_path(dir, SearchMethod::Forward, Strategy::Avg, EnergyKind::Accuracy));

    emit_report(run_experiment(config), config);
    c.check(slurp(manifest_path(dir)) == manifest, "manifest is byte-identical on a rerun");
    c.check(slurp(grid_txt_path(dir, SearchMethod::Backward)) == grid,
            "grid table is byte-identical on a rerun");
    c.check(slurp(comparison_path(dir)) == comparison,
            "comparison table is byte-identical on a rerun");

    config.threads = 1;
    emit_report(run_experiment(config), config);
    c.check(slurp(manifest_path(dir)) == manifest, "one worker reproduces the default bytes");
    c.check(slurp(roc_path(dir, SearchMethod::Forward, Strategy::Avg, EnergyKind::Accuracy)) ==
                roc,
            "roc files are byte-identical across thread counts");
    fs::remove_all(dir);
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    run_criterion("fusion-oracle-equivalence", 5.0, fusion_oracle_equivalence);
    run_criterion("search-fidelity", 30.0, search_fidelity);
    run_criterion("metric-identities", 0.0, metric_identities);
    run_criterion("auc-properties", 0.0, auc_properties);
    run_criterion("cv-integrity", 0.0, cv_integrity);
    run_criterion("desk-scale-run", 120.0, desk_scale_run);
    run_criterion("report-shapes-and-product-collapse", 0.0, report_shapes_and_product_collapse);
    run_criterion("determinism", 0.0, determinism);
    if (g_failures == 0) {
        std::printf("all criteria passed\n");
    } else {
        std::printf("%d criteria FAILED\n", g_failures);
    }
    return g_failures;
}
