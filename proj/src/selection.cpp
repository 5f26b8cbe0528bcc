#include "drscreen/selection.hpp"

#include <algorithm>
#include <numeric>

#include "drscreen/metrics.hpp"

namespace drscreen {

std::string_view energy_name(EnergyKind kind) {
    switch (kind) {
        case EnergyKind::Sensitivity: return "sensitivity";
        case EnergyKind::Accuracy: return "accuracy";
        case EnergyKind::FScore: return "fscore";
    }
    return "?";
}

std::optional<EnergyKind> parse_energy(std::string_view name) {
    for (const EnergyKind k : kAllEnergies) {
        if (energy_name(k) == name) return k;
    }
    return std::nullopt;
}

std::string_view search_name(SearchMethod m) {
    switch (m) {
        case SearchMethod::Forward: return "forward";
        case SearchMethod::Backward: return "backward";
        case SearchMethod::All: return "all";
        case SearchMethod::SingleBest: return "single_best";
    }
    return "?";
}

std::optional<SearchMethod> parse_search(std::string_view name) {
    for (const SearchMethod m : kAllSearchMethods) {
        if (search_name(m) == name) return m;
    }
    return std::nullopt;
}

std::string_view search_mode_name(SearchMode m) {
    return m == SearchMode::SinglePass ? "single_pass" : "iterative";
}

std::optional<SearchMode> parse_search_mode(std::string_view name) {
    if (name == "single_pass") return SearchMode::SinglePass;
    if (name == "iterative") return SearchMode::Iterative;
    return std::nullopt;
}

double energy(EnergyKind kind, std::span<const ClassLabel> predictions,
              std::span<const ClassLabel> truth, ClassLabel positive) {
    const ConfusionCounts c = confusion(predictions, truth, positive);
    switch (kind) {
        case EnergyKind::Sensitivity: return sensitivity(c);
        case EnergyKind::Accuracy: return accuracy(c);
        case EnergyKind::FScore: return f_score(c);
    }
    return 0.0;
}

MemberScores::MemberScores(std::span<const ClassifierPtr> members,
                           std::span<const FeatureVector> xs) {
    if (members.empty()) {
        throw RangeError("member pool must not be empty");
    }
    num_members_ = members.size();
    rows_.reserve(xs.size());
    for (const auto& x : xs) {
        std::vector<DiscriminatorScores> per_member;
        per_member.reserve(members.size());
        for (const auto& m : members) per_member.push_back(m->score(x));
        rows_.push_back(std::move(per_member));
    }
}

MemberScores MemberScores::from_rows(std::vector<std::vector<DiscriminatorScores>> rows) {
    if (rows.empty() || rows.front().empty()) {
        throw RangeError("score table must not be empty");
    }
    // Incoming layout is rows[member][sample]; store per sample.
    MemberScores out;
    const std::size_t num_samples = rows.front().size();
    for (const auto& member_rows : rows) {
        if (member_rows.size() != num_samples) {
            throw LengthMismatchError("members disagree on the number of samples");
        }
    }
    out.num_members_ = rows.size();
    out.rows_.reserve(num_samples);
    for (std::size_t s = 0; s < num_samples; ++s) {
        std::vector<DiscriminatorScores> per_member;
        per_member.reserve(rows.size());
        for (std::size_t m = 0; m < rows.size(); ++m) per_member.push_back(rows[m][s]);
        out.rows_.push_back(std::move(per_member));
    }
    return out;
}

namespace {

struct SubsetFuser {
    const MemberScores& scores;
    const FusionPolicy& policy;
    std::span<const std::size_t> subset;
    std::vector<double> subset_weights;
    bool has_weights = false;

    SubsetFuser(const MemberScores& scores, std::span<const std::size_t> subset,
                const FusionPolicy& policy)
        : scores(scores), policy(policy), subset(subset) {
        if (subset.empty()) {
            throw RangeError("subset must not be empty");
        }
        for (const std::size_t m : subset) {
            if (m >= scores.num_members()) {
                throw RangeError("subset index " + std::to_string(m) + " out of range");
            }
        }
        if (policy.strategy == Strategy::WMaj) {
            if (!policy.pool_weights) {
                throw MissingWeightsError("wmaj policy needs pool weights");
            }
            if (policy.pool_weights->size() != scores.num_members()) {
                throw MissingWeightsError("expected one pool weight per member");
            }
            subset_weights.reserve(subset.size());
            for (const std::size_t m : subset) {
                subset_weights.push_back((*policy.pool_weights)[m]);
            }
            has_weights = true;
        }
    }

    std::vector<DiscriminatorScores> gather(std::size_t sample) const {
        std::vector<DiscriminatorScores> rows;
        rows.reserve(subset.size());
        for (const std::size_t m : subset) rows.push_back(scores.row(m, sample));
        return rows;
    }

    ClassLabel decide(std::size_t sample) const {
        const auto rows = gather(sample);
        return fuse_rows(policy.strategy, rows, has_weights ? &subset_weights : nullptr,
                         policy.product_epsilon);
    }

    double positive_score(std::size_t sample, ClassLabel positive) const {
        const auto rows = gather(sample);
        return fuse_positive_rows(policy.strategy, rows, positive,
                                  has_weights ? &subset_weights : nullptr,
                                  policy.product_epsilon);
    }
};

}  // namespace

std::vector<ClassLabel> fused_predictions(const MemberScores& scores,
                                          std::span<const std::size_t> subset,
                                          const FusionPolicy& policy) {
    const SubsetFuser fuser(scores, subset, policy);
    std::vector<ClassLabel> out;
    out.reserve(scores.num_samples());
    for (std::size_t s = 0; s < scores.num_samples(); ++s) out.push_back(fuser.decide(s));
    return out;
}

std::vector<double> fused_positive_scores(const MemberScores& scores,
                                          std::span<const std::size_t> subset,
                                          const FusionPolicy& policy, ClassLabel positive) {
    const SubsetFuser fuser(scores, subset, policy);
    std::vector<double> out;
    out.reserve(scores.num_samples());
    for (std::size_t s = 0; s < scores.num_samples(); ++s) {
        out.push_back(fuser.positive_score(s, positive));
    }
    return out;
}

double subset_energy(const MemberScores& scores, std::span<const std::size_t> subset,
                     const FusionPolicy& policy, EnergyKind kind,
                     std::span<const ClassLabel> truth) {
    const auto predictions = fused_predictions(scores, subset, policy);
    return energy(kind, predictions, truth);
}

std::vector<double> member_energies(const MemberScores& scores, const FusionPolicy& policy,
                                    EnergyKind kind, std::span<const ClassLabel> truth) {
    std::vector<double> out;
    out.reserve(scores.num_members());
    for (std::size_t m = 0; m < scores.num_members(); ++m) {
        const std::size_t subset[1] = {m};
        out.push_back(subset_energy(scores, subset, policy, kind, truth));
    }
    return out;
}

namespace {

std::size_t argmax_lowest(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

}  // namespace

SearchResult forward_search(const MemberScores& scores, const FusionPolicy& policy,
                            EnergyKind kind, std::span<const ClassLabel> truth,
                            SearchMode mode) {
    const auto singles = member_energies(scores, policy, kind, truth);
    const std::size_t best = argmax_lowest(singles);

    SearchResult result;
    result.selected = {best};
    result.initial_energy = singles[best];
    result.energy = singles[best];
    bool accepted_any = true;
    while (accepted_any) {
        accepted_any = false;
        for (std::size_t i = 0; i < scores.num_members(); ++i) {
            if (std::find(result.selected.begin(), result.selected.end(), i) !=
                result.selected.end()) {
                continue;
            }
            std::vector<std::size_t> candidate = result.selected;
            candidate.push_back(i);
            const double e = subset_energy(scores, candidate, policy, kind, truth);
            const bool accepted = e > result.energy;
            if (accepted) {
                result.selected = std::move(candidate);
                result.energy = e;
                accepted_any = true;
            }
            result.trace.push_back({i, e, accepted});
        }
        if (mode == SearchMode::SinglePass) break;
    }
    return result;
}

SearchResult backward_search(const MemberScores& scores, const FusionPolicy& policy,
                             EnergyKind kind, std::span<const ClassLabel> truth,
                             SearchMode mode) {
    SearchResult result;
    result.selected.resize(scores.num_members());
    std::iota(result.selected.begin(), result.selected.end(), std::size_t{0});
    result.initial_energy = subset_energy(scores, result.selected, policy, kind, truth);
    result.energy = result.initial_energy;

    bool accepted_any = true;
    while (accepted_any) {
        accepted_any = false;
        for (std::size_t i = 0; i < scores.num_members(); ++i) {
            if (result.selected.size() == 1) break;  // never empty the ensemble
            if (std::find(result.selected.begin(), result.selected.end(), i) ==
                result.selected.end()) {
                continue;
            }
            std::vector<std::size_t> candidate;
            candidate.reserve(result.selected.size() - 1);
            for (const std::size_t m : result.selected) {
                if (m != i) candidate.push_back(m);
            }
            const double e = subset_energy(scores, candidate, policy, kind, truth);
            const bool accepted = e > result.energy;
            if (accepted) {
                result.selected = std::move(candidate);
                result.energy = e;
                accepted_any = true;
            }
            result.trace.push_back({i, e, accepted});
        }
        if (mode == SearchMode::SinglePass) break;
    }
    return result;
}

SearchResult select_all(const MemberScores& scores, const FusionPolicy& policy, EnergyKind kind,
                        std::span<const ClassLabel> truth) {
    SearchResult result;
    result.selected.resize(scores.num_members());
    std::iota(result.selected.begin(), result.selected.end(), std::size_t{0});
    result.energy = subset_energy(scores, result.selected, policy, kind, truth);
    result.initial_energy = result.energy;
    return result;
}

SearchResult select_single_best(const MemberScores& scores, const FusionPolicy& policy,
                                EnergyKind kind, std::span<const ClassLabel> truth) {
    const auto singles = member_energies(scores, policy, kind, truth);
    const std::size_t best = argmax_lowest(singles);
    SearchResult result;
    result.selected = {best};
    result.energy = singles[best];
    result.initial_energy = singles[best];
    return result;
}

SearchResult run_search(SearchMethod method, const MemberScores& scores,
                        const FusionPolicy& policy, EnergyKind kind,
                        std::span<const ClassLabel> truth, SearchMode mode) {
    switch (method) {
        case SearchMethod::Forward: return forward_search(scores, policy, kind, truth, mode);
        case SearchMethod::Backward: return backward_search(scores, policy, kind, truth, mode);
        case SearchMethod::All: return select_all(scores, policy, kind, truth);
        case SearchMethod::SingleBest: return select_single_best(scores, policy, kind, truth);
    }
    throw RangeError("unknown search method");
}

SearchResult forward_search(std::span<const ClassifierPtr> pool, const FusionPolicy& policy,
                            EnergyKind kind, const EvalData& data) {
    const MemberScores scores(pool, data.features);
    return forward_search(scores, policy, kind, data.truth);
}

SearchResult backward_search(std::span<const ClassifierPtr> pool, const FusionPolicy& policy,
                             EnergyKind kind, const EvalData& data) {
    const MemberScores scores(pool, data.features);
    return backward_search(scores, policy, kind, data.truth);
}

}  // namespace drscreen
