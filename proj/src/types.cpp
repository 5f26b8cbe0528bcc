#include "drscreen/types.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace drscreen {

DiscriminatorScores::DiscriminatorScores(std::vector<double> scores)
    : scores_(std::move(scores)) {
    if (scores_.empty()) {
        throw RangeError("discriminator scores must not be empty");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < scores_.size(); ++i) {
        const double s = scores_[i];
        if (!std::isfinite(s)) {
            throw NonFiniteError("discriminator score " + std::to_string(i) + " is not finite");
        }
        if (s < 0.0 || s > 1.0) {
            throw RangeError("discriminator score " + std::to_string(i) + " = " +
                             std::to_string(s) + " outside [0,1]");
        }
        sum += s;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw RangeError("discriminator scores sum to " + std::to_string(sum) + ", expected 1");
    }
}

ClassLabel decide(const TrainedClassifier& classifier, const FeatureVector& x) {
    return argmax_label(classifier.score(x).values());
}

FeatureVector validate_feature_vector(std::span<const double> raw) {
    if (raw.size() != kFeatureCount) {
        throw ArityError("expected " + std::to_string(kFeatureCount) + " features, got " +
                         std::to_string(raw.size()));
    }
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!std::isfinite(raw[i])) {
            throw NonFiniteError("chi" + std::to_string(i) + " is not finite");
        }
    }
    if (raw[0] < 0.0 || raw[0] > 1.0) {
        throw RangeError("chi0 = " + std::to_string(raw[0]) + " outside [0,1]");
    }
    if (raw[1] != 0.0 && raw[1] != 1.0) {
        throw RangeError("chi1 = " + std::to_string(raw[1]) + " not in {0,1}");
    }
    for (std::size_t i = 2; i < kFeatureCount; ++i) {
        if (raw[i] < 0.0) {
            throw RangeError("chi" + std::to_string(i) + " = " + std::to_string(raw[i]) +
                             " is negative");
        }
    }
    FeatureVector out{};
    std::copy(raw.begin(), raw.end(), out.begin());
    return out;
}

}  // namespace drscreen
