#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "drscreen/classifiers.hpp"
#include "drscreen/dataio.hpp"
#include "drscreen/fusion.hpp"
#include "drscreen/metrics.hpp"
#include "drscreen/selection.hpp"

namespace drscreen {

/// What the search energy is evaluated on: the full training portion of a
/// fold, or a stratified validation slice held out from it (the models then
/// train on the remainder). The test fold is never touched.
enum class EnergyOn { Train, Val };

std::string_view energy_on_name(EnergyOn e);
std::optional<EnergyOn> parse_energy_on(std::string_view name);

struct ExperimentConfig {
    std::variant<std::filesystem::path, SynthParams> data;
    Scenario scenario = Scenario::NoDrVsDr;
    std::vector<LearnerSpec> pool;
    std::vector<Strategy> strategies;
    std::vector<EnergyKind> energies;
    std::vector<SearchMethod> searches;
    std::size_t k = 10;
    std::uint64_t seed = 0;
    EnergyOn energy_on = EnergyOn::Val;
    double val_fraction = 0.25;
    double product_epsilon = 0.0;
    SearchMode search_mode = SearchMode::SinglePass;
    std::filesystem::path out_dir;
    std::size_t threads = 0;  // 0: one worker per hardware thread (capped at k)
};

/// Raised when a fold's pipeline fails; names the fold.
struct FoldError : Error {
    using Error::Error;
};

/// Sample-index sets of one cross-validation fold, all referring to the
/// scenario-mapped dataset: `fit` trains the pool, `energy_eval` feeds the
/// search energy, `test` is evaluated once at the end.
struct FoldSplit {
    std::vector<std::size_t> fit;
    std::vector<std::size_t> energy_eval;
    std::vector<std::size_t> test;
};

struct FoldOutcome {
    std::vector<std::size_t> selected;
    double initial_energy = 0.0;
    double search_energy = 0.0;
    std::vector<SearchStep> trace;
    std::vector<double> wmaj_weights;  // empty unless the cell strategy is wmaj
    std::vector<ClassLabel> predictions;  // aligned with the fold's test indices
    std::vector<double> positive_scores;
    ConfusionCounts counts;
    double sensitivity = 0.0;
    double specificity = 0.0;
    double accuracy = 0.0;
};

/// One (search, strategy, energy) grid cell: per-fold outcomes, their
/// unweighted means, and the ROC of the pooled test-fold scores.
struct CellResult {
    SearchMethod search = SearchMethod::Forward;
    Strategy strategy = Strategy::Avg;
    EnergyKind energy = EnergyKind::Accuracy;
    std::vector<FoldOutcome> folds;
    double mean_sensitivity = 0.0;
    double mean_specificity = 0.0;
    double mean_accuracy = 0.0;
    RocCurve roc;
    std::vector<std::size_t> modal_roster;
};

struct EvaluationReport {
    std::string data_provenance;
    std::size_t source_record_count = 0;
    std::vector<std::size_t> scenario_rows;
    std::vector<ClassLabel> labels;
    FoldPlan folds;
    std::vector<FoldSplit> splits;
    std::vector<CellResult> cells;  // search-major, then strategy, then energy
};

/// Runs the full pipeline: scenario mapping, stratified folds, per-fold
/// pool training, per-cell membership search on the energy data, and
/// test-fold evaluation. Deterministic for a fixed config (thread count
/// does not affect results).
EvaluationReport run_experiment(const ExperimentConfig& config);

/// Writes everything under config.out_dir: the run manifest, one grid
/// table (txt and csv) per search method, the comparison table, and one
/// ROC point file per cell.
void emit_report(const EvaluationReport& report, const ExperimentConfig& config);

std::filesystem::path manifest_path(const std::filesystem::path& out_dir);
std::filesystem::path grid_txt_path(const std::filesystem::path& out_dir, SearchMethod search);
std::filesystem::path grid_csv_path(const std::filesystem::path& out_dir, SearchMethod search);
std::filesystem::path comparison_path(const std::filesystem::path& out_dir);
std::filesystem::path roc_path(const std::filesystem::path& out_dir, SearchMethod search,
                               Strategy strategy, EnergyKind energy);

}  // namespace drscreen
