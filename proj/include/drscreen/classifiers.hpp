#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "drscreen/types.hpp"

namespace drscreen {

enum class LearnerKind { Knn, NaiveBayes, DecisionTree, RandomForest, AdaBoost };

std::string_view learner_name(LearnerKind kind);
std::optional<LearnerKind> parse_learner(std::string_view name);

/// A learner choice plus its hyperparameters. Recognized keys:
///   knn:            k (>=1, default 5)
///   naive_bayes:    (none)
///   decision_tree:  max_depth (>=1, default 32), min_leaf (>=1, default 1)
///   random_forest:  n_trees (>=1, default 25), seed (default 0),
///                   max_depth, min_leaf, bootstrap (0/1, default 1),
///                   feature_fraction ((0,1], default 0.7)
///   adaboost:       n_rounds (>=1, default 50)
/// Unknown keys are rejected.
struct LearnerSpec {
    LearnerKind kind = LearnerKind::Knn;
    std::map<std::string, double> params;

    double param(std::string_view key, double fallback) const;
};

/// Builds a spec and validates its parameter names and ranges.
/// Throws ConfigError on an unknown learner, unknown key or bad value.
LearnerSpec make_learner_spec(std::string_view kind,
                              const std::map<std::string, double>& params = {});

void validate_learner_spec(const LearnerSpec& spec);

/// Trains an immutable model. Deterministic given (spec, data), including
/// any seed in the spec. Throws EmptyClassError when a class in
/// [0, num_classes) has no training sample. When every feature is constant,
/// tree-based learners degrade to a prior-only model and log a warning.
ClassifierPtr train(const LearnerSpec& spec, const LabeledDataset& data);

/// Element-wise mean of discriminator rows; the forest's aggregation rule.
DiscriminatorScores mean_scores(std::span<const DiscriminatorScores> rows);

}  // namespace drscreen
