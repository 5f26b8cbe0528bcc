#include "drscreen/fusion.hpp"

#include <algorithm>
#include <cmath>

namespace drscreen {

std::string_view strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Maj: return "maj";
        case Strategy::WMaj: return "wmaj";
        case Strategy::Avg: return "avg";
        case Strategy::Pro: return "pro";
        case Strategy::Min: return "min";
        case Strategy::Max: return "max";
    }
    return "?";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
    for (const Strategy s : kAllStrategies) {
        if (strategy_name(s) == name) return s;
    }
    return std::nullopt;
}

namespace {

std::size_t checked_num_classes(std::span<const DiscriminatorScores> rows) {
    if (rows.empty()) {
        throw RangeError("fusion requires at least one member row");
    }
    const std::size_t m = rows.front().num_classes();
    for (const auto& row : rows) {
        if (row.num_classes() != m) {
            throw RangeError("fusion rows disagree on the number of classes");
        }
    }
    return m;
}

const std::vector<double>& checked_weights(std::span<const DiscriminatorScores> rows,
                                           const std::vector<double>* weights) {
    if (weights == nullptr) {
        throw MissingWeightsError("weighted majority voting requires weights");
    }
    if (weights->size() != rows.size()) {
        throw MissingWeightsError("expected " + std::to_string(rows.size()) + " weights, got " +
                                  std::to_string(weights->size()));
    }
    return *weights;
}

// Per-class aggregate for the algebraic rules.
std::vector<double> aggregate_rows(Strategy strategy, std::span<const DiscriminatorScores> rows,
                                   std::size_t num_classes, double product_epsilon) {
    std::vector<double> agg(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c) {
        double value = 0.0;
        switch (strategy) {
            case Strategy::Avg: {
                for (const auto& row : rows) value += row[c];
                value /= static_cast<double>(rows.size());
                break;
            }
            case Strategy::Pro: {
                value = 1.0;
                for (const auto& row : rows) value *= std::max(row[c], product_epsilon);
                break;
            }
            case Strategy::Min: {
                value = rows.front()[c];
                for (const auto& row : rows) value = std::min(value, row[c]);
                break;
            }
            case Strategy::Max: {
                value = rows.front()[c];
                for (const auto& row : rows) value = std::max(value, row[c]);
                break;
            }
            default:
                throw RangeError("not an algebraic strategy");
        }
        agg[c] = value;
    }
    return agg;
}

}  // namespace

ClassLabel fuse_rows(Strategy strategy, std::span<const DiscriminatorScores> rows,
                     const std::vector<double>* weights, double product_epsilon) {
    const std::size_t num_classes = checked_num_classes(rows);
    switch (strategy) {
        case Strategy::Maj: {
            std::vector<double> votes(num_classes, 0.0);
            for (const auto& row : rows) votes[argmax_label(row.values())] += 1.0;
            return argmax_label(votes);
        }
        case Strategy::WMaj: {
            const auto& w = checked_weights(rows, weights);
            std::vector<double> votes(num_classes, 0.0);
            for (std::size_t j = 0; j < rows.size(); ++j) {
                votes[argmax_label(rows[j].values())] += w[j];
            }
            return argmax_label(votes);
        }
        default:
            return argmax_label(aggregate_rows(strategy, rows, num_classes, product_epsilon));
    }
}

double fuse_positive_rows(Strategy strategy, std::span<const DiscriminatorScores> rows,
                          ClassLabel positive, const std::vector<double>* weights,
                          double product_epsilon) {
    const std::size_t num_classes = checked_num_classes(rows);
    if (num_classes != 2) {
        throw NotBinaryError("positive-class confidence is defined for two classes, got " +
                             std::to_string(num_classes));
    }
    if (positive >= 2) {
        throw RangeError("positive class index must be 0 or 1");
    }
    switch (strategy) {
        case Strategy::Maj: {
            double pos_votes = 0.0;
            for (const auto& row : rows) {
                if (argmax_label(row.values()) == positive) pos_votes += 1.0;
            }
            return pos_votes / static_cast<double>(rows.size());
        }
        case Strategy::WMaj: {
            const auto& w = checked_weights(rows, weights);
            double pos_weight = 0.0, total = 0.0;
            for (std::size_t j = 0; j < rows.size(); ++j) {
                total += w[j];
                if (argmax_label(rows[j].values()) == positive) pos_weight += w[j];
            }
            return total == 0.0 ? 0.0 : pos_weight / total;
        }
        case Strategy::Pro: {
            double product = 1.0;
            for (const auto& row : rows) product *= std::max(row[positive], product_epsilon);
            // L-th root keeps the scale comparable across ensemble sizes.
            return std::pow(product, 1.0 / static_cast<double>(rows.size()));
        }
        default: {
            return aggregate_rows(strategy, rows, num_classes, product_epsilon)[positive];
        }
    }
}

Ensemble::Ensemble(std::vector<ClassifierPtr> members, Strategy strategy,
                   std::optional<std::vector<double>> weights, double product_epsilon)
    : members_(std::move(members)),
      strategy_(strategy),
      weights_(std::move(weights)),
      product_epsilon_(product_epsilon) {
    if (members_.empty()) {
        throw RangeError("an ensemble needs at least one member");
    }
    num_classes_ = members_.front()->num_classes();
    for (const auto& m : members_) {
        if (!m) throw RangeError("ensemble member is null");
        if (m->num_classes() != num_classes_) {
            throw RangeError("ensemble members disagree on the number of classes");
        }
    }
    if (strategy_ == Strategy::WMaj) {
        if (!weights_) {
            throw MissingWeightsError("weighted majority voting requires weights");
        }
        if (weights_->size() != members_.size()) {
            throw MissingWeightsError("expected one weight per member");
        }
        bool any_positive = false;
        for (const double w : *weights_) {
            if (w < 0.0) throw RangeError("weights must be non-negative");
            any_positive |= w > 0.0;
        }
        if (!any_positive) {
            throw RangeError("at least one weight must be positive");
        }
    } else if (weights_) {
        throw RangeError("weights are only meaningful for the wmaj strategy");
    }
}

std::vector<DiscriminatorScores> Ensemble::member_rows(const FeatureVector& x) const {
    std::vector<DiscriminatorScores> rows;
    rows.reserve(members_.size());
    for (const auto& m : members_) rows.push_back(m->score(x));
    return rows;
}

ClassLabel Ensemble::decide(const FeatureVector& x) const {
    const auto rows = member_rows(x);
    return fuse_rows(strategy_, rows, weights_ ? &*weights_ : nullptr, product_epsilon_);
}

double Ensemble::positive_score(const FeatureVector& x, ClassLabel positive) const {
    const auto rows = member_rows(x);
    return fuse_positive_rows(strategy_, rows, positive, weights_ ? &*weights_ : nullptr,
                              product_epsilon_);
}

ClassLabel fuse_majority(const Ensemble& ensemble, const FeatureVector& x) {
    if (ensemble.strategy() != Strategy::Maj) {
        throw RangeError("ensemble strategy is not maj");
    }
    return ensemble.decide(x);
}

ClassLabel fuse_weighted_majority(const Ensemble& ensemble, const FeatureVector& x) {
    if (ensemble.strategy() != Strategy::WMaj) {
        throw RangeError("ensemble strategy is not wmaj");
    }
    return ensemble.decide(x);
}

ClassLabel fuse_algebraic(const Ensemble& ensemble, const FeatureVector& x) {
    switch (ensemble.strategy()) {
        case Strategy::Avg:
        case Strategy::Pro:
        case Strategy::Min:
        case Strategy::Max:
            return ensemble.decide(x);
        default:
            throw RangeError("ensemble strategy is not algebraic");
    }
}

double fused_positive_score(const Ensemble& ensemble, const FeatureVector& x,
                            ClassLabel positive) {
    return ensemble.positive_score(x, positive);
}

std::vector<double> normalized_weights(std::span<const double> raw) {
    double sum = 0.0;
    for (const double w : raw) {
        if (w < 0.0) throw RangeError("weights must be non-negative");
        sum += w;
    }
    std::vector<double> out(raw.size());
    if (sum == 0.0) {
        std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(raw.size()));
    } else {
        for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] / sum;
    }
    return out;
}

}  // namespace drscreen
