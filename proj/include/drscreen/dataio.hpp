#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "drscreen/types.hpp"

namespace drscreen {

struct Dataset {
    std::vector<GradedRecord> records;
    std::string provenance;
};

/// CSV header is exactly `chi0,...,chi18,grade`; the grade column holds
/// 0..3. Every row must satisfy the feature-vector invariants; violations
/// raise ValueError carrying the line number.
Dataset load_csv(const std::filesystem::path& path);
Dataset read_csv(std::istream& in, std::string provenance);

void write_csv(const Dataset& data, const std::filesystem::path& path);
void write_csv(const Dataset& data, std::ostream& out);

std::string csv_header();

/// Full-file scan that collects every schema/row problem instead of
/// stopping at the first one. `problems` empty means the file is clean.
struct CsvAudit {
    std::size_t rows = 0;
    std::vector<std::string> problems;
};

CsvAudit audit_csv(const std::filesystem::path& path);

/// Binary relabelings of the four grades.
enum class Scenario { R0VsR1, NoDrVsDr };

std::string_view scenario_name(Scenario s);
std::optional<Scenario> parse_scenario(std::string_view name);

/// The scenario-mapped binary problem plus, per kept sample, the index of
/// its source record. Positive class is 1.
struct ScenarioDataset {
    LabeledDataset data;
    std::vector<std::size_t> source_rows;
};

/// R0VsR1 keeps only R0/R1 records (R1 positive); NoDrVsDr keeps all and
/// marks R1, R2, R3 positive. Throws EmptyAfterFilterError when either
/// class ends up empty.
ScenarioDataset apply_scenario(const Dataset& data, Scenario scenario);

/// Stratified fold assignment: folds partition the samples and per-class
/// fold counts differ by at most one. Deterministic per seed.
struct FoldPlan {
    std::size_t k = 0;
    std::vector<std::size_t> assignment;  // sample index -> fold
    std::uint64_t seed = 0;

    std::vector<std::size_t> test_indices(std::size_t fold) const;
    std::vector<std::size_t> train_indices(std::size_t fold) const;
};

FoldPlan stratified_kfold(std::span<const ClassLabel> labels, std::size_t k, std::uint64_t seed);

/// Grade mix of the screening population this schema mirrors:
/// 540, 153, 247 and 260 cases out of 1200.
inline constexpr std::array<double, kGradeCount> kDefaultGradeProportions = {
    540.0 / 1200.0, 153.0 / 1200.0, 247.0 / 1200.0, 260.0 / 1200.0};

struct SynthParams {
    std::size_t n = 1200;
    std::array<double, kGradeCount> proportions = kDefaultGradeProportions;
    double separation = 1.0;
    std::uint64_t seed = 0;
};

/// Draws a labeled cohort with grade-dependent feature distributions.
/// Grade counts follow largest-remainder apportionment of the proportions,
/// which must sum to 1 within 1e-6 (BadProportionsError otherwise; also for
/// n < 4). `separation` scales how far the grade-conditional means move
/// apart; 0 makes every feature distribution grade-independent. Output
/// depends only on (n, proportions, separation, seed).
Dataset generate_synthetic(const SynthParams& params);

/// Exact grade counts the generator uses for (n, proportions).
std::array<std::size_t, kGradeCount> apportion_counts(
    std::size_t n, const std::array<double, kGradeCount>& proportions);

/// Location parameter of each feature's sampling distribution for a grade;
/// lets tests check the construction (equal across grades iff separation
/// is 0, strictly increasing in grade for chi1..chi18 otherwise).
std::array<double, kFeatureCount> synthetic_feature_means(Grade grade, double separation);

}  // namespace drscreen
