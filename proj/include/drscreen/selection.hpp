#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "drscreen/fusion.hpp"
#include "drscreen/types.hpp"

namespace drscreen {

/// Objectives a membership search can maximize. All three map a prediction
/// set to [0,1]; a zero denominator yields 0.
enum class EnergyKind { Sensitivity, Accuracy, FScore };

inline constexpr std::array<EnergyKind, 3> kAllEnergies = {
    EnergyKind::Sensitivity, EnergyKind::Accuracy, EnergyKind::FScore};

std::string_view energy_name(EnergyKind kind);
std::optional<EnergyKind> parse_energy(std::string_view name);

/// Energy of binary predictions against truth (positive class = 1).
/// Sensitivity = TP/(TP+FN), Accuracy = (TP+TN)/total,
/// F-score = 2TP/(2TP+FN+FP). Throws LengthMismatchError.
double energy(EnergyKind kind, std::span<const ClassLabel> predictions,
              std::span<const ClassLabel> truth, ClassLabel positive = 1);

enum class SearchMethod { Forward, Backward, All, SingleBest };

inline constexpr std::array<SearchMethod, 4> kAllSearchMethods = {
    SearchMethod::Forward, SearchMethod::Backward, SearchMethod::All, SearchMethod::SingleBest};

std::string_view search_name(SearchMethod m);
std::optional<SearchMethod> parse_search(std::string_view name);

/// SinglePass is the one-sweep procedure; Iterative repeats the sweep until
/// a full pass accepts nothing.
enum class SearchMode { SinglePass, Iterative };

std::string_view search_mode_name(SearchMode m);
std::optional<SearchMode> parse_search_mode(std::string_view name);

/// Fusion settings shared by every subset evaluated during one search.
/// pool_weights (one per pool member) are required for WMaj; a subset is
/// fused with its members' entries.
struct FusionPolicy {
    Strategy strategy = Strategy::Avg;
    std::optional<std::vector<double>> pool_weights;
    double product_epsilon = 0.0;
};

/// Discriminator rows of a fixed member pool over a fixed evaluation set,
/// so subset evaluations do not re-score members.
class MemberScores {
public:
    MemberScores(std::span<const ClassifierPtr> members, std::span<const FeatureVector> xs);

    /// Test seam: rows[member][sample].
    static MemberScores from_rows(std::vector<std::vector<DiscriminatorScores>> rows);

    std::size_t num_members() const { return num_members_; }
    std::size_t num_samples() const { return rows_.size(); }
    const DiscriminatorScores& row(std::size_t member, std::size_t sample) const {
        return rows_[sample][member];
    }

private:
    MemberScores() = default;
    std::vector<std::vector<DiscriminatorScores>> rows_;  // [sample][member]
    std::size_t num_members_ = 0;
};

std::vector<ClassLabel> fused_predictions(const MemberScores& scores,
                                          std::span<const std::size_t> subset,
                                          const FusionPolicy& policy);
std::vector<double> fused_positive_scores(const MemberScores& scores,
                                          std::span<const std::size_t> subset,
                                          const FusionPolicy& policy, ClassLabel positive = 1);
double subset_energy(const MemberScores& scores, std::span<const std::size_t> subset,
                     const FusionPolicy& policy, EnergyKind kind,
                     std::span<const ClassLabel> truth);

/// Each singleton's energy, in pool order.
std::vector<double> member_energies(const MemberScores& scores, const FusionPolicy& policy,
                                    EnergyKind kind, std::span<const ClassLabel> truth);

struct SearchStep {
    std::size_t candidate = 0;
    double energy = 0.0;
    bool accepted = false;
};

/// Outcome of a membership search. `selected` keeps insertion order
/// (forward) or remaining pool order (backward); `initial_energy` is the
/// energy of the starting ensemble, and replaying the accepted trace steps
/// from it reproduces `energy`.
struct SearchResult {
    std::vector<std::size_t> selected;
    double energy = 0.0;
    double initial_energy = 0.0;
    std::vector<SearchStep> trace;
};

// Greedy searches in pool-index order; a candidate is accepted only on a
// strict energy increase. Backward never removes the last member.
SearchResult forward_search(const MemberScores& scores, const FusionPolicy& policy,
                            EnergyKind kind, std::span<const ClassLabel> truth,
                            SearchMode mode = SearchMode::SinglePass);
SearchResult backward_search(const MemberScores& scores, const FusionPolicy& policy,
                             EnergyKind kind, std::span<const ClassLabel> truth,
                             SearchMode mode = SearchMode::SinglePass);
SearchResult select_all(const MemberScores& scores, const FusionPolicy& policy, EnergyKind kind,
                        std::span<const ClassLabel> truth);
SearchResult select_single_best(const MemberScores& scores, const FusionPolicy& policy,
                                EnergyKind kind, std::span<const ClassLabel> truth);
SearchResult run_search(SearchMethod method, const MemberScores& scores,
                        const FusionPolicy& policy, EnergyKind kind,
                        std::span<const ClassLabel> truth,
                        SearchMode mode = SearchMode::SinglePass);

/// Convenience overloads that score the pool on the evaluation set first.
struct EvalData {
    std::span<const FeatureVector> features;
    std::span<const ClassLabel> truth;
};

SearchResult forward_search(std::span<const ClassifierPtr> pool, const FusionPolicy& policy,
                            EnergyKind kind, const EvalData& data);
SearchResult backward_search(std::span<const ClassifierPtr> pool, const FusionPolicy& policy,
                             EnergyKind kind, const EvalData& data);

}  // namespace drscreen
