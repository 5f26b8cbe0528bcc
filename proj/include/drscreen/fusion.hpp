#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "drscreen/types.hpp"

namespace drscreen {

/// The six combiners: plain and weighted voting plus the four algebraic
/// rules over the members' discriminator values.
enum class Strategy { Maj, WMaj, Avg, Pro, Min, Max };

inline constexpr std::array<Strategy, 6> kAllStrategies = {
    Strategy::Maj, Strategy::WMaj, Strategy::Avg, Strategy::Pro, Strategy::Min, Strategy::Max};

std::string_view strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);

/// Fuses one sample's per-member discriminator rows into a decision.
/// `weights` is required for WMaj and ignored otherwise. `product_epsilon`,
/// when positive, floors every row entry before Pro multiplies them; the
/// default 0 keeps the raw product rule, where a single zero vetoes a class.
/// Ties resolve to the lowest class index.
ClassLabel fuse_rows(Strategy strategy, std::span<const DiscriminatorScores> rows,
                     const std::vector<double>* weights = nullptr,
                     double product_epsilon = 0.0);

/// Monotone positive-class confidence of a fused binary decision: the
/// aggregated positive discriminator for the algebraic rules (the product
/// additionally taken to the 1/L power), the (weighted) fraction of members
/// voting positive for the voting rules. Requires a two-class row set.
double fuse_positive_rows(Strategy strategy, std::span<const DiscriminatorScores> rows,
                          ClassLabel positive, const std::vector<double>* weights = nullptr,
                          double product_epsilon = 0.0);

/// An ordered, non-empty set of trained members plus the fusion policy.
/// Weights are mandatory for WMaj (length L, at least one positive entry)
/// and rejected for every other strategy.
class Ensemble {
public:
    Ensemble(std::vector<ClassifierPtr> members, Strategy strategy,
             std::optional<std::vector<double>> weights = std::nullopt,
             double product_epsilon = 0.0);

    std::size_t size() const { return members_.size(); }
    std::size_t num_classes() const { return num_classes_; }
    Strategy strategy() const { return strategy_; }
    const std::vector<ClassifierPtr>& members() const { return members_; }
    const std::optional<std::vector<double>>& weights() const { return weights_; }
    double product_epsilon() const { return product_epsilon_; }

    ClassLabel decide(const FeatureVector& x) const;
    double positive_score(const FeatureVector& x, ClassLabel positive) const;

private:
    std::vector<DiscriminatorScores> member_rows(const FeatureVector& x) const;

    std::vector<ClassifierPtr> members_;
    Strategy strategy_;
    std::optional<std::vector<double>> weights_;
    double product_epsilon_;
    std::size_t num_classes_;
};

ClassLabel fuse_majority(const Ensemble& ensemble, const FeatureVector& x);
ClassLabel fuse_weighted_majority(const Ensemble& ensemble, const FeatureVector& x);
ClassLabel fuse_algebraic(const Ensemble& ensemble, const FeatureVector& x);
double fused_positive_score(const Ensemble& ensemble, const FeatureVector& x,
                            ClassLabel positive);

/// Scales weights to sum 1; an all-zero vector becomes uniform.
std::vector<double> normalized_weights(std::span<const double> raw);

}  // namespace drscreen
