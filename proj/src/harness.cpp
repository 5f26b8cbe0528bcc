#include "drscreen/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "drscreen/config.hpp"
#include "drscreen/rng.hpp"
#include "drscreen/textio.hpp"

namespace drscreen {

std::string_view energy_on_name(EnergyOn e) {
    return e == EnergyOn::Train ? "train" : "val";
}

std::optional<EnergyOn> parse_energy_on(std::string_view name) {
    if (name == "train") return EnergyOn::Train;
    if (name == "val") return EnergyOn::Val;
    return std::nullopt;
}

namespace {

struct CellKey {
    SearchMethod search;
    Strategy strategy;
    EnergyKind energy;
};

std::vector<CellKey> cell_grid(const ExperimentConfig& config) {
    std::vector<CellKey> grid;
    for (const SearchMethod s : config.searches) {
        for (const Strategy st : config.strategies) {
            for (const EnergyKind e : config.energies) {
                grid.push_back({s, st, e});
            }
        }
    }
    return grid;
}

std::vector<FeatureVector> gather_features(const LabeledDataset& data,
                                           std::span<const std::size_t> indices) {
    std::vector<FeatureVector> out;
    out.reserve(indices.size());
    for (const std::size_t i : indices) out.push_back(data.features[i]);
    return out;
}

std::vector<ClassLabel> gather_labels(const LabeledDataset& data,
                                      std::span<const std::size_t> indices) {
    std::vector<ClassLabel> out;
    out.reserve(indices.size());
    for (const std::size_t i : indices) out.push_back(data.labels[i]);
    return out;
}

// Splits the fold's training portion into fit and energy-evaluation parts,
// stratified per class, keeping at least one sample of each class on each
// side.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> validation_split(
    std::span<const std::size_t> train_part, const LabeledDataset& data, double fraction,
    std::uint64_t seed) {
    std::map<ClassLabel, std::vector<std::size_t>> per_class;
    for (const std::size_t i : train_part) per_class[data.labels[i]].push_back(i);

    Rng rng(seed);
    std::vector<std::size_t> fit, eval;
    for (auto& [label, indices] : per_class) {
        if (indices.size() < 2) {
            throw TooFewSamplesError("class " + std::to_string(label) +
                                     " has too few training samples for a validation slice");
        }
        deterministic_shuffle(indices, rng);
        const auto want = static_cast<std::size_t>(
            std::llround(fraction * static_cast<double>(indices.size())));
        const std::size_t n_eval = std::clamp<std::size_t>(want, 1, indices.size() - 1);
        for (std::size_t i = 0; i < indices.size(); ++i) {
            (i < n_eval ? eval : fit).push_back(indices[i]);
        }
    }
    std::sort(fit.begin(), fit.end());
    std::sort(eval.begin(), eval.end());
    return {std::move(fit), std::move(eval)};
}

struct FoldComputation {
    FoldSplit split;
    std::vector<FoldOutcome> cell_outcomes;  // one per grid cell
};

FoldComputation compute_fold(const ExperimentConfig& config, const LabeledDataset& data,
                             const FoldPlan& plan, std::size_t fold,
                             const std::vector<CellKey>& grid) {
    FoldComputation out;
    out.split.test = plan.test_indices(fold);
    const auto train_part = plan.train_indices(fold);
    if (config.energy_on == EnergyOn::Val) {
        std::tie(out.split.fit, out.split.energy_eval) = validation_split(
            train_part, data, config.val_fraction, mix_seed(config.seed, 0x76616c00ULL + fold));
    } else {
        out.split.fit = train_part;
        out.split.energy_eval = train_part;
    }

    LabeledDataset fit_data{gather_features(data, out.split.fit),
                            gather_labels(data, out.split.fit), data.num_classes};
    std::vector<ClassifierPtr> members;
    members.reserve(config.pool.size());
    for (const LearnerSpec& spec : config.pool) members.push_back(train(spec, fit_data));

    const auto eval_features = gather_features(data, out.split.energy_eval);
    const auto test_features = gather_features(data, out.split.test);
    const auto eval_truth = gather_labels(data, out.split.energy_eval);
    const auto test_truth = gather_labels(data, out.split.test);
    const MemberScores eval_scores(members, eval_features);
    const MemberScores test_scores(members, test_features);

    // Weighted-majority weights: each member's own energy on the energy
    // data, normalized; uniform when every member scores zero.
    std::map<EnergyKind, std::vector<double>> wmaj_weights;
    const bool wants_wmaj = std::count(config.strategies.begin(), config.strategies.end(),
                                       Strategy::WMaj) > 0;
    if (wants_wmaj) {
        const FusionPolicy singleton_policy{Strategy::Avg, std::nullopt, 0.0};
        for (const EnergyKind kind : config.energies) {
            wmaj_weights[kind] = normalized_weights(
                member_energies(eval_scores, singleton_policy, kind, eval_truth));
        }
    }

    out.cell_outcomes.reserve(grid.size());
    for (const CellKey& key : grid) {
        FusionPolicy policy;
        policy.strategy = key.strategy;
        policy.product_epsilon = config.product_epsilon;
        FoldOutcome outcome;
        if (key.strategy == Strategy::WMaj) {
            policy.pool_weights = wmaj_weights.at(key.energy);
            outcome.wmaj_weights = *policy.pool_weights;
        }
        const SearchResult sr = run_search(key.search, eval_scores, policy, key.energy,
                                           eval_truth, config.search_mode);
        outcome.selected = sr.selected;
        outcome.initial_energy = sr.initial_energy;
        outcome.search_energy = sr.energy;
        outcome.trace = sr.trace;
        outcome.predictions = fused_predictions(test_scores, sr.selected, policy);
        outcome.positive_scores = fused_positive_scores(test_scores, sr.selected, policy, 1);
        outcome.counts = confusion(outcome.predictions, test_truth, 1);
        outcome.sensitivity = drscreen::sensitivity(outcome.counts);
        outcome.specificity = drscreen::specificity(outcome.counts);
        outcome.accuracy = drscreen::accuracy(outcome.counts);
        out.cell_outcomes.push_back(std::move(outcome));
    }
    return out;
}

std::vector<std::size_t> modal_roster(const std::vector<FoldOutcome>& folds) {
    std::map<std::vector<std::size_t>, std::size_t> counts;
    for (const FoldOutcome& f : folds) {
        std::vector<std::size_t> canon = f.selected;
        std::sort(canon.begin(), canon.end());
        ++counts[canon];
    }
    std::vector<std::size_t> best;
    std::size_t best_count = 0;
    for (const auto& [roster, count] : counts) {  // map order breaks ties lexicographically
        if (count > best_count) {
            best_count = count;
            best = roster;
        }
    }
    return best;
}

}  // namespace

EvaluationReport run_experiment(const ExperimentConfig& config) {
    if (config.pool.empty()) {
        throw ConfigError("classifier pool must not be empty");
    }
    if (config.strategies.empty() || config.energies.empty() || config.searches.empty()) {
        throw ConfigError("strategies, energies and searches must not be empty");
    }
    for (const LearnerSpec& spec : config.pool) validate_learner_spec(spec);

    const Dataset dataset = std::holds_alternative<SynthParams>(config.data)
                                ? generate_synthetic(std::get<SynthParams>(config.data))
                                : load_csv(std::get<std::filesystem::path>(config.data));
    const ScenarioDataset scenario = apply_scenario(dataset, config.scenario);

    EvaluationReport report;
    report.data_provenance = dataset.provenance;
    report.source_record_count = dataset.records.size();
    report.scenario_rows = scenario.source_rows;
    report.labels = scenario.data.labels;
    report.folds = stratified_kfold(scenario.data.labels, config.k, config.seed);

    const auto grid = cell_grid(config);
    std::vector<FoldComputation> fold_results(config.k);
    std::vector<std::exception_ptr> fold_errors(config.k);

    std::size_t worker_count = config.threads;
    if (worker_count == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        worker_count = hw == 0 ? 1 : hw;
    }
    worker_count = std::min<std::size_t>(worker_count, config.k);

    std::atomic<std::size_t> next_fold{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t f = next_fold.fetch_add(1);
            if (f >= config.k) break;
            try {
                fold_results[f] = compute_fold(config, scenario.data, report.folds, f, grid);
            } catch (const std::exception& e) {
                fold_errors[f] = std::make_exception_ptr(
                    FoldError("fold " + std::to_string(f) + ": " + e.what()));
            }
        }
    };
    if (worker_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(worker_count);
        for (std::size_t t = 0; t < worker_count; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    for (std::size_t f = 0; f < config.k; ++f) {
        if (fold_errors[f]) std::rethrow_exception(fold_errors[f]);
    }

    report.splits.reserve(config.k);
    for (auto& fr : fold_results) report.splits.push_back(fr.split);

    report.cells.reserve(grid.size());
    for (std::size_t c = 0; c < grid.size(); ++c) {
        CellResult cell;
        cell.search = grid[c].search;
        cell.strategy = grid[c].strategy;
        cell.energy = grid[c].energy;
        std::vector<double> pooled_scores;
        std::vector<ClassLabel> pooled_truth;
        for (std::size_t f = 0; f < config.k; ++f) {
            FoldOutcome outcome = std::move(fold_results[f].cell_outcomes[c]);
            cell.mean_sensitivity += outcome.sensitivity;
            cell.mean_specificity += outcome.specificity;
            cell.mean_accuracy += outcome.accuracy;
            pooled_scores.insert(pooled_scores.end(), outcome.positive_scores.begin(),
                                 outcome.positive_scores.end());
            for (const std::size_t i : report.splits[f].test) {
                pooled_truth.push_back(report.labels[i]);
            }
            cell.folds.push_back(std::move(outcome));
        }
        const double k = static_cast<double>(config.k);
        cell.mean_sensitivity /= k;
        cell.mean_specificity /= k;
        cell.mean_accuracy /= k;
        cell.roc = roc_auc(pooled_scores, pooled_truth, 1);
        cell.modal_roster = modal_roster(cell.folds);
        report.cells.push_back(std::move(cell));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Report files

std::filesystem::path manifest_path(const std::filesystem::path& out_dir) {
    return out_dir / "manifest.json";
}

std::filesystem::path grid_txt_path(const std::filesystem::path& out_dir, SearchMethod search) {
    return out_dir / "tables" / (std::string(search_name(search)) + "_grid.txt");
}

std::filesystem::path grid_csv_path(const std::filesystem::path& out_dir, SearchMethod search) {
    return out_dir / "tables" / (std::string(search_name(search)) + "_grid.csv");
}

std::filesystem::path comparison_path(const std::filesystem::path& out_dir) {
    return out_dir / "tables" / "comparison.csv";
}

std::filesystem::path roc_path(const std::filesystem::path& out_dir, SearchMethod search,
                               Strategy strategy, EnergyKind energy) {
    return out_dir / "roc" /
           (std::string(search_name(search)) + "_" + std::string(strategy_name(strategy)) + "_" +
            std::string(energy_name(energy)) + ".csv");
}

namespace {

std::string percent_cell(const CellResult& cell) {
    auto pct = [](double v) { return std::to_string(std::llround(v * 100.0)) + "%"; };
    return pct(cell.mean_sensitivity) + "/" + pct(cell.mean_specificity) + "/" +
           pct(cell.mean_accuracy);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << content;
}

const CellResult* find_cell(const EvaluationReport& report, SearchMethod s, Strategy st,
                            EnergyKind e) {
    for (const CellResult& cell : report.cells) {
        if (cell.search == s && cell.strategy == st && cell.energy == e) return &cell;
    }
    return nullptr;
}

nlohmann::ordered_json fold_json(std::size_t fold, const FoldOutcome& f) {
    nlohmann::ordered_json j;
    j["fold"] = fold;
    j["selected"] = f.selected;
    j["initial_energy"] = f.initial_energy;
    j["search_energy"] = f.search_energy;
    nlohmann::ordered_json trace = nlohmann::ordered_json::array();
    for (const SearchStep& step : f.trace) {
        trace.push_back({step.candidate, step.energy, step.accepted ? 1 : 0});
    }
    j["trace"] = std::move(trace);
    if (!f.wmaj_weights.empty()) j["wmaj_weights"] = f.wmaj_weights;
    j["predictions"] = f.predictions;
    j["scores"] = f.positive_scores;
    j["tp"] = f.counts.tp;
    j["fp"] = f.counts.fp;
    j["tn"] = f.counts.tn;
    j["fn"] = f.counts.fn;
    j["sensitivity"] = f.sensitivity;
    j["specificity"] = f.specificity;
    j["accuracy"] = f.accuracy;
    return j;
}

}  // namespace

void emit_report(const EvaluationReport& report, const ExperimentConfig& config) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir / "tables");
    fs::create_directories(config.out_dir / "roc");

    // Manifest: config echo, split bookkeeping, and everything needed to
    // recompute each table value from raw per-fold predictions.
    nlohmann::ordered_json m;
    m["config"] = encode_config(config);
    m["data"] = {{"provenance", report.data_provenance},
                 {"source_records", report.source_record_count},
                 {"scenario_samples", report.labels.size()}};
    m["scenario_rows"] = report.scenario_rows;
    m["labels"] = report.labels;
    m["folds"] = {{"k", report.folds.k}, {"seed", report.folds.seed},
                  {"assignment", report.folds.assignment}};
    nlohmann::ordered_json splits = nlohmann::ordered_json::array();
    for (const FoldSplit& s : report.splits) {
        splits.push_back({{"fit", s.fit}, {"energy", s.energy_eval}, {"test", s.test}});
    }
    m["splits"] = std::move(splits);
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (const CellResult& cell : report.cells) {
        nlohmann::ordered_json c;
        c["search"] = search_name(cell.search);
        c["strategy"] = strategy_name(cell.strategy);
        c["energy"] = energy_name(cell.energy);
        c["mean_sensitivity"] = cell.mean_sensitivity;
        c["mean_specificity"] = cell.mean_specificity;
        c["mean_accuracy"] = cell.mean_accuracy;
        c["auc"] = cell.roc.auc;
        c["modal_roster"] = cell.modal_roster;
        nlohmann::ordered_json folds = nlohmann::ordered_json::array();
        for (std::size_t f = 0; f < cell.folds.size(); ++f) {
            folds.push_back(fold_json(f, cell.folds[f]));
        }
        c["folds"] = std::move(folds);
        cells.push_back(std::move(c));
    }
    m["cells"] = std::move(cells);
    write_file(manifest_path(config.out_dir), m.dump(2) + "\n");

    // Grid tables: rows are fusion strategies, columns energy functions.
    for (const SearchMethod search : config.searches) {
        std::ostringstream txt;
        txt << "scenario: " << scenario_name(config.scenario) << "\n";
        txt << "search: " << search_name(search) << "\n";
        txt << "cell: sensitivity%/specificity%/accuracy% (mean over " << config.k
            << " folds)\n\n";
        txt << "strategy";
        for (const EnergyKind e : config.energies) txt << " | " << energy_name(e);
        txt << "\n";
        std::ostringstream csv;
        csv << "strategy,energy,sensitivity,specificity,accuracy,auc\n";
        for (const Strategy st : config.strategies) {
            txt << strategy_name(st);
            for (const EnergyKind e : config.energies) {
                const CellResult* cell = find_cell(report, search, st, e);
                txt << " | " << percent_cell(*cell);
                csv << strategy_name(st) << ',' << energy_name(e) << ','
                    << format_double(cell->mean_sensitivity) << ','
                    << format_double(cell->mean_specificity) << ','
                    << format_double(cell->mean_accuracy) << ',' << format_double(cell->roc.auc)
                    << '\n';
            }
            txt << "\n";
        }
        write_file(grid_txt_path(config.out_dir, search), txt.str());
        write_file(grid_csv_path(config.out_dir, search), csv.str());
    }

    // Comparison rows: one line per cell with the pooled AUC.
    {
        std::ostringstream csv;
        csv << "search,strategy,energy,sensitivity,specificity,accuracy,auc\n";
        for (const CellResult& cell : report.cells) {
            csv << search_name(cell.search) << ',' << strategy_name(cell.strategy) << ','
                << energy_name(cell.energy) << ',' << format_double(cell.mean_sensitivity) << ','
                << format_double(cell.mean_specificity) << ','
                << format_double(cell.mean_accuracy) << ',' << format_double(cell.roc.auc)
                << '\n';
        }
        write_file(comparison_path(config.out_dir), csv.str());
    }

    for (const CellResult& cell : report.cells) {
        std::ostringstream roc;
        write_roc(cell.roc, roc);
        write_file(roc_path(config.out_dir, cell.search, cell.strategy, cell.energy), roc.str());
    }
}

}  // namespace drscreen
