#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "drscreen/errors.hpp"

namespace drscreen {

/// Number of screening features per record: quality score, pre-screening
/// flag, six MA counts, nine exudate measures, MC-ODC distance, and the
/// image-level DR confidence.
inline constexpr std::size_t kFeatureCount = 19;

using FeatureVector = std::array<double, kFeatureCount>;

/// Index into the label set of a classification problem (0-based).
using ClassLabel = std::size_t;

/// Retinopathy grade of a screening record, from healthy to most severe.
enum class Grade : int { R0 = 0, R1 = 1, R2 = 2, R3 = 3 };

inline constexpr std::size_t kGradeCount = 4;

struct GradedRecord {
    FeatureVector features{};
    Grade grade = Grade::R0;
};

/// Per-class discriminator values emitted by a classifier. Each value lies
/// in [0,1] and the values sum to 1 (checked to 1e-9 at construction).
class DiscriminatorScores {
public:
    explicit DiscriminatorScores(std::vector<double> scores);

    const std::vector<double>& values() const { return scores_; }
    std::size_t num_classes() const { return scores_.size(); }
    double operator[](std::size_t i) const { return scores_[i]; }

private:
    std::vector<double> scores_;
};

/// Contract for a trained model: immutable, and identical inputs yield
/// identical scores on every call.
class TrainedClassifier {
public:
    virtual ~TrainedClassifier() = default;

    virtual std::size_t num_classes() const = 0;
    virtual const std::string& name() const = 0;
    virtual DiscriminatorScores score(const FeatureVector& x) const = 0;
};

using ClassifierPtr = std::shared_ptr<const TrainedClassifier>;

/// Index of the largest value; ties resolve to the lowest index.
inline ClassLabel argmax_label(std::span<const double> values) {
    ClassLabel best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

/// Argmax decision over the classifier's discriminator scores.
ClassLabel decide(const TrainedClassifier& classifier, const FeatureVector& x);

/// Checks the screening-schema invariants and returns the typed vector.
/// Throws ArityError, NonFiniteError or RangeError.
FeatureVector validate_feature_vector(std::span<const double> raw);

/// A set of feature vectors with integer labels in [0, num_classes).
struct LabeledDataset {
    std::vector<FeatureVector> features;
    std::vector<ClassLabel> labels;
    std::size_t num_classes = 2;

    std::size_t size() const { return features.size(); }
};

}  // namespace drscreen
