#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "drscreen/types.hpp"

namespace drscreen {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
};

/// Exact confusion counts of predictions against truth for the given
/// positive class. Throws LengthMismatchError.
ConfusionCounts confusion(std::span<const ClassLabel> predictions,
                          std::span<const ClassLabel> truth, ClassLabel positive);

// Rates follow the 0-when-undefined convention: a zero denominator yields 0.
double sensitivity(const ConfusionCounts& c);
double specificity(const ConfusionCounts& c);
double accuracy(const ConfusionCounts& c);
double f_score(const ConfusionCounts& c);

/// Empirical ROC curve. Points run from (0,0) to (1,1) and are monotone
/// non-decreasing in both coordinates; auc is the Mann-Whitney estimate
/// with half-credit for score ties.
struct RocCurve {
    std::vector<std::array<double, 2>> points;  // (fpr, tpr)
    double auc = 0.0;
};

/// Builds the empirical ROC curve of the positive-class scores against the
/// binary truth. Throws OneClassOnlyError when truth has a single class.
RocCurve roc_auc(std::span<const double> scores, std::span<const ClassLabel> truth,
                 ClassLabel positive = 1);

/// Two columns "fpr,tpr" per point, then an "# auc = ..." footer.
void write_roc(const RocCurve& curve, std::ostream& out);

}  // namespace drscreen
