#include "drscreen/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "drscreen/textio.hpp"

namespace drscreen {

ConfusionCounts confusion(std::span<const ClassLabel> predictions,
                          std::span<const ClassLabel> truth, ClassLabel positive) {
    if (predictions.size() != truth.size()) {
        throw LengthMismatchError("predictions (" + std::to_string(predictions.size()) +
                                  ") and truth (" + std::to_string(truth.size()) +
                                  ") differ in length");
    }
    if (predictions.empty()) {
        throw LengthMismatchError("cannot form confusion counts from zero samples");
    }
    ConfusionCounts c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool actual_pos = truth[i] == positive;
        const bool predicted_pos = predictions[i] == positive;
        if (actual_pos) {
            predicted_pos ? ++c.tp : ++c.fn;
        } else {
            predicted_pos ? ++c.fp : ++c.tn;
        }
    }
    return c;
}

namespace {
double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}
}  // namespace

double sensitivity(const ConfusionCounts& c) { return ratio(c.tp, c.tp + c.fn); }
double specificity(const ConfusionCounts& c) { return ratio(c.tn, c.tn + c.fp); }
double accuracy(const ConfusionCounts& c) { return ratio(c.tp + c.tn, c.total()); }
double f_score(const ConfusionCounts& c) { return ratio(2 * c.tp, 2 * c.tp + c.fn + c.fp); }

RocCurve roc_auc(std::span<const double> scores, std::span<const ClassLabel> truth,
                 ClassLabel positive) {
    if (scores.size() != truth.size()) {
        throw LengthMismatchError("scores and truth differ in length");
    }
    std::size_t pos_total = 0;
    for (const ClassLabel t : truth) pos_total += (t == positive) ? 1 : 0;
    const std::size_t neg_total = truth.size() - pos_total;
    if (pos_total == 0 || neg_total == 0) {
        throw OneClassOnlyError("ROC needs at least one positive and one negative sample");
    }

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });

    RocCurve curve;
    curve.points.push_back({0.0, 0.0});

    // Sweep thresholds from high to low; each tie group contributes one
    // point and, for the AUC, a trapezoid (which realizes the half-credit
    // tie convention of the Mann-Whitney statistic).
    double auc = 0.0;
    std::size_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t group_pos = 0, group_neg = 0;
        const double threshold = scores[order[i]];
        while (i < order.size() && scores[order[i]] == threshold) {
            (truth[order[i]] == positive) ? ++group_pos : ++group_neg;
            ++i;
        }
        auc += static_cast<double>(group_neg) *
               (static_cast<double>(tp) + 0.5 * static_cast<double>(group_pos));
        tp += group_pos;
        fp += group_neg;
        curve.points.push_back({static_cast<double>(fp) / static_cast<double>(neg_total),
                                static_cast<double>(tp) / static_cast<double>(pos_total)});
    }
    curve.auc = auc / (static_cast<double>(pos_total) * static_cast<double>(neg_total));
    return curve;
}

void write_roc(const RocCurve& curve, std::ostream& out) {
    for (const auto& p : curve.points) {
        out << format_double(p[0]) << ',' << format_double(p[1]) << '\n';
    }
    out << "# auc = " << format_double(curve.auc) << '\n';
}

}  // namespace drscreen
