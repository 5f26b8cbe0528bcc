#include "drscreen/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>
#include <vector>

#include "drscreen/rng.hpp"

namespace drscreen {

std::string_view learner_name(LearnerKind kind) {
    switch (kind) {
        case LearnerKind::Knn: return "knn";
        case LearnerKind::NaiveBayes: return "naive_bayes";
        case LearnerKind::DecisionTree: return "decision_tree";
        case LearnerKind::RandomForest: return "random_forest";
        case LearnerKind::AdaBoost: return "adaboost";
    }
    return "?";
}

std::optional<LearnerKind> parse_learner(std::string_view name) {
    for (const LearnerKind k :
         {LearnerKind::Knn, LearnerKind::NaiveBayes, LearnerKind::DecisionTree,
          LearnerKind::RandomForest, LearnerKind::AdaBoost}) {
        if (learner_name(k) == name) return k;
    }
    return std::nullopt;
}

double LearnerSpec::param(std::string_view key, double fallback) const {
    const auto it = params.find(std::string(key));
    return it == params.end() ? fallback : it->second;
}

namespace {

struct ParamRule {
    double min;
    double max;
    bool integral;
};

const std::map<std::string, ParamRule>& param_rules(LearnerKind kind) {
    static const std::map<std::string, ParamRule> knn = {{"k", {1, 1e9, true}}};
    static const std::map<std::string, ParamRule> bayes = {};
    static const std::map<std::string, ParamRule> tree = {{"max_depth", {1, 1e9, true}},
                                                          {"min_leaf", {1, 1e9, true}}};
    static const std::map<std::string, ParamRule> forest = {
        {"n_trees", {1, 1e9, true}},    {"seed", {0, 1.8e19, true}},
        {"max_depth", {1, 1e9, true}},  {"min_leaf", {1, 1e9, true}},
        {"bootstrap", {0, 1, true}},    {"feature_fraction", {1e-9, 1, false}}};
    static const std::map<std::string, ParamRule> boost = {{"n_rounds", {1, 1e9, true}}};
    switch (kind) {
        case LearnerKind::Knn: return knn;
        case LearnerKind::NaiveBayes: return bayes;
        case LearnerKind::DecisionTree: return tree;
        case LearnerKind::RandomForest: return forest;
        case LearnerKind::AdaBoost: return boost;
    }
    return bayes;
}

}  // namespace

void validate_learner_spec(const LearnerSpec& spec) {
    const auto& rules = param_rules(spec.kind);
    for (const auto& [key, value] : spec.params) {
        const auto it = rules.find(key);
        if (it == rules.end()) {
            throw ConfigError("unknown parameter '" + key + "' for learner '" +
                              std::string(learner_name(spec.kind)) + "'");
        }
        const ParamRule& rule = it->second;
        if (!std::isfinite(value) || value < rule.min || value > rule.max) {
            throw ConfigError("parameter '" + key + "' out of range");
        }
        if (rule.integral && value != std::floor(value)) {
            throw ConfigError("parameter '" + key + "' must be an integer");
        }
    }
}

LearnerSpec make_learner_spec(std::string_view kind, const std::map<std::string, double>& params) {
    const auto parsed = parse_learner(kind);
    if (!parsed) {
        throw ConfigError("unknown learner kind '" + std::string(kind) + "'");
    }
    LearnerSpec spec{*parsed, params};
    validate_learner_spec(spec);
    return spec;
}

namespace {

// ---------------------------------------------------------------------------
// Shared pieces

// Per-feature z-scoring; constant features keep scale 1.
struct Standardizer {
    FeatureVector mean{};
    FeatureVector scale{};

    static Standardizer fit(const std::vector<FeatureVector>& xs) {
        Standardizer s;
        const double n = static_cast<double>(xs.size());
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            double sum = 0.0;
            for (const auto& x : xs) sum += x[f];
            const double mu = sum / n;
            double var = 0.0;
            for (const auto& x : xs) var += (x[f] - mu) * (x[f] - mu);
            var /= n;
            s.mean[f] = mu;
            s.scale[f] = var > 0.0 ? std::sqrt(var) : 1.0;
        }
        return s;
    }

    FeatureVector apply(const FeatureVector& x) const {
        FeatureVector out{};
        for (std::size_t f = 0; f < kFeatureCount; ++f) out[f] = (x[f] - mean[f]) / scale[f];
        return out;
    }
};

std::vector<std::size_t> class_counts(const LabeledDataset& data) {
    std::vector<std::size_t> counts(data.num_classes, 0);
    for (const ClassLabel y : data.labels) {
        if (y >= data.num_classes) {
            throw RangeError("label " + std::to_string(y) + " outside [0, " +
                             std::to_string(data.num_classes) + ")");
        }
        ++counts[y];
    }
    return counts;
}

void require_all_classes(const LabeledDataset& data) {
    if (data.size() == 0) {
        throw EmptyClassError("training data is empty");
    }
    if (data.labels.size() != data.features.size()) {
        throw LengthMismatchError("features and labels differ in length");
    }
    if (data.num_classes < 2) {
        throw RangeError("a classification problem needs at least two classes");
    }
    const auto counts = class_counts(data);
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) {
            throw EmptyClassError("class " + std::to_string(c) + " has no training samples");
        }
    }
}

bool all_features_constant(const std::vector<FeatureVector>& xs) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        for (const auto& x : xs) {
            if (x[f] != xs.front()[f]) return false;
        }
    }
    return true;
}

std::vector<double> prior_frequencies(const LabeledDataset& data) {
    const auto counts = class_counts(data);
    std::vector<double> prior(counts.size());
    for (std::size_t c = 0; c < counts.size(); ++c) {
        prior[c] = static_cast<double>(counts[c]) / static_cast<double>(data.size());
    }
    return prior;
}

class PriorModel final : public TrainedClassifier {
public:
    PriorModel(std::string name, std::vector<double> prior)
        : name_(std::move(name)), prior_(std::move(prior)) {}
    std::size_t num_classes() const override { return prior_.size(); }
    const std::string& name() const override { return name_; }
    DiscriminatorScores score(const FeatureVector&) const override {
        return DiscriminatorScores(prior_);
    }

private:
    std::string name_;
    std::vector<double> prior_;
};

// ---------------------------------------------------------------------------
// k nearest neighbours

class KnnModel final : public TrainedClassifier {
public:
    KnnModel(std::string name, std::size_t k, Standardizer std, const LabeledDataset& data)
        : name_(std::move(name)), k_(std::min(k, data.size())), std_(std),
          labels_(data.labels), num_classes_(data.num_classes) {
        xs_.reserve(data.size());
        for (const auto& x : data.features) xs_.push_back(std_.apply(x));
    }

    std::size_t num_classes() const override { return num_classes_; }
    const std::string& name() const override { return name_; }

    DiscriminatorScores score(const FeatureVector& raw) const override {
        const FeatureVector x = std_.apply(raw);
        std::vector<std::pair<double, std::size_t>> dist;
        dist.reserve(xs_.size());
        for (std::size_t i = 0; i < xs_.size(); ++i) {
            double d2 = 0.0;
            for (std::size_t f = 0; f < kFeatureCount; ++f) {
                const double d = x[f] - xs_[i][f];
                d2 += d * d;
            }
            dist.emplace_back(d2, i);
        }
        // (distance, index) ordering makes neighbour ties deterministic.
        std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_ - 1),
                         dist.end());
        std::vector<double> votes(num_classes_, 0.0);
        for (std::size_t i = 0; i < k_; ++i) votes[labels_[dist[i].second]] += 1.0;
        for (double& v : votes) v /= static_cast<double>(k_);
        return DiscriminatorScores(std::move(votes));
    }

private:
    std::string name_;
    std::size_t k_;
    Standardizer std_;
    std::vector<FeatureVector> xs_;
    std::vector<ClassLabel> labels_;
    std::size_t num_classes_;
};

// ---------------------------------------------------------------------------
// Gaussian naive Bayes on standardized features

class NaiveBayesModel final : public TrainedClassifier {
public:
    NaiveBayesModel(std::string name, Standardizer std, const LabeledDataset& data)
        : name_(std::move(name)), std_(std), num_classes_(data.num_classes) {
        const auto counts = class_counts(data);
        log_prior_.resize(num_classes_);
        mean_.assign(num_classes_, std::vector<double>(kFeatureCount, 0.0));
        var_.assign(num_classes_, std::vector<double>(kFeatureCount, 0.0));
        std::vector<FeatureVector> zs;
        zs.reserve(data.size());
        for (const auto& x : data.features) zs.push_back(std_.apply(x));
        for (std::size_t i = 0; i < zs.size(); ++i) {
            for (std::size_t f = 0; f < kFeatureCount; ++f) {
                mean_[data.labels[i]][f] += zs[i][f];
            }
        }
        for (std::size_t c = 0; c < num_classes_; ++c) {
            log_prior_[c] = std::log(static_cast<double>(counts[c]) /
                                     static_cast<double>(data.size()));
            for (double& m : mean_[c]) m /= static_cast<double>(counts[c]);
        }
        for (std::size_t i = 0; i < zs.size(); ++i) {
            const ClassLabel c = data.labels[i];
            for (std::size_t f = 0; f < kFeatureCount; ++f) {
                const double d = zs[i][f] - mean_[c][f];
                var_[c][f] += d * d;
            }
        }
        for (std::size_t c = 0; c < num_classes_; ++c) {
            for (double& v : var_[c]) {
                v = std::max(v / static_cast<double>(counts[c]), kVarFloor);
            }
        }
    }

    std::size_t num_classes() const override { return num_classes_; }
    const std::string& name() const override { return name_; }

    DiscriminatorScores score(const FeatureVector& raw) const override {
        const FeatureVector x = std_.apply(raw);
        std::vector<double> log_post(num_classes_);
        for (std::size_t c = 0; c < num_classes_; ++c) {
            double ll = log_prior_[c];
            for (std::size_t f = 0; f < kFeatureCount; ++f) {
                const double d = x[f] - mean_[c][f];
                ll += -0.5 * (std::log(2.0 * kPi * var_[c][f]) + d * d / var_[c][f]);
            }
            log_post[c] = ll;
        }
        const double peak = *std::max_element(log_post.begin(), log_post.end());
        double total = 0.0;
        std::vector<double> post(num_classes_);
        for (std::size_t c = 0; c < num_classes_; ++c) {
            post[c] = std::exp(log_post[c] - peak);
            total += post[c];
        }
        for (double& p : post) p /= total;
        return DiscriminatorScores(std::move(post));
    }

private:
    static constexpr double kVarFloor = 1e-9;
    static constexpr double kPi = 3.141592653589793238462643383279502884;

    std::string name_;
    Standardizer std_;
    std::size_t num_classes_;
    std::vector<double> log_prior_;
    std::vector<std::vector<double>> mean_;
    std::vector<std::vector<double>> var_;
};

// ---------------------------------------------------------------------------
// CART-style decision tree: Gini impurity, midpoint thresholds, first-best
// tie-break (lowest feature index, then lowest threshold).

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::vector<double> leaf;
    std::unique_ptr<TreeNode> left;
    std::unique_ptr<TreeNode> right;
};

struct TreeParams {
    std::size_t max_depth = 32;
    std::size_t min_leaf = 1;
};

class TreeBuilder {
public:
    TreeBuilder(const std::vector<FeatureVector>& xs, const std::vector<ClassLabel>& ys,
                std::size_t num_classes, TreeParams params, std::vector<std::size_t> features)
        : xs_(xs), ys_(ys), num_classes_(num_classes), params_(params),
          features_(std::move(features)) {}

    std::unique_ptr<TreeNode> build(std::vector<std::size_t> indices) const {
        return build_node(std::move(indices), 0);
    }

private:
    std::unique_ptr<TreeNode> make_leaf(const std::vector<std::size_t>& indices) const {
        std::vector<double> freq(num_classes_, 0.0);
        for (const std::size_t i : indices) freq[ys_[i]] += 1.0;
        for (double& f : freq) f /= static_cast<double>(indices.size());
        auto node = std::make_unique<TreeNode>();
        node->leaf = std::move(freq);
        return node;
    }

    // Sum over classes of count^2 / n; larger means lower weighted Gini.
    static double purity_score(std::span<const double> counts, double n) {
        if (n == 0.0) return 0.0;
        double s = 0.0;
        for (const double c : counts) s += c * c;
        return s / n;
    }

    std::unique_ptr<TreeNode> build_node(std::vector<std::size_t> indices,
                                         std::size_t depth) const {
        const std::size_t n = indices.size();
        std::vector<double> counts(num_classes_, 0.0);
        for (const std::size_t i : indices) counts[ys_[i]] += 1.0;
        const bool pure =
            std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0.0; }) <= 1;
        if (pure || depth >= params_.max_depth || n < 2 * params_.min_leaf) {
            return make_leaf(indices);
        }

        const double parent_score = purity_score(counts, static_cast<double>(n));
        int best_feature = -1;
        double best_threshold = 0.0;
        double best_score = parent_score;

        std::vector<std::size_t> order(indices);
        std::vector<double> left_counts(num_classes_);
        for (const std::size_t f : features_) {
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                if (xs_[a][f] != xs_[b][f]) return xs_[a][f] < xs_[b][f];
                return a < b;
            });
            std::fill(left_counts.begin(), left_counts.end(), 0.0);
            for (std::size_t pos = 0; pos + 1 < n; ++pos) {
                left_counts[ys_[order[pos]]] += 1.0;
                const double v = xs_[order[pos]][f];
                const double next = xs_[order[pos + 1]][f];
                if (v == next) continue;
                const std::size_t n_left = pos + 1;
                const std::size_t n_right = n - n_left;
                if (n_left < params_.min_leaf || n_right < params_.min_leaf) continue;
                double score = purity_score(left_counts, static_cast<double>(n_left));
                {
                    double right = 0.0;
                    for (std::size_t c = 0; c < num_classes_; ++c) {
                        const double rc = counts[c] - left_counts[c];
                        right += rc * rc;
                    }
                    score += right / static_cast<double>(n_right);
                }
                if (score > best_score) {
                    best_score = score;
                    best_feature = static_cast<int>(f);
                    best_threshold = v + 0.5 * (next - v);
                }
            }
        }

        if (best_feature < 0) {
            return make_leaf(indices);
        }

        std::vector<std::size_t> left_idx, right_idx;
        for (const std::size_t i : indices) {
            (xs_[i][static_cast<std::size_t>(best_feature)] <= best_threshold ? left_idx
                                                                              : right_idx)
                .push_back(i);
        }
        auto node = std::make_unique<TreeNode>();
        node->feature = best_feature;
        node->threshold = best_threshold;
        node->left = build_node(std::move(left_idx), depth + 1);
        node->right = build_node(std::move(right_idx), depth + 1);
        return node;
    }

    const std::vector<FeatureVector>& xs_;
    const std::vector<ClassLabel>& ys_;
    std::size_t num_classes_;
    TreeParams params_;
    std::vector<std::size_t> features_;
};

const std::vector<double>& tree_leaf(const TreeNode& root, const FeatureVector& x) {
    const TreeNode* node = &root;
    while (node->feature >= 0) {
        node = x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left.get()
                                                                             : node->right.get();
    }
    return node->leaf;
}

std::vector<std::size_t> all_feature_indices() {
    std::vector<std::size_t> f(kFeatureCount);
    std::iota(f.begin(), f.end(), std::size_t{0});
    return f;
}

class DecisionTreeModel final : public TrainedClassifier {
public:
    DecisionTreeModel(std::string name, std::size_t num_classes, std::unique_ptr<TreeNode> root)
        : name_(std::move(name)), num_classes_(num_classes), root_(std::move(root)) {}

    std::size_t num_classes() const override { return num_classes_; }
    const std::string& name() const override { return name_; }
    DiscriminatorScores score(const FeatureVector& x) const override {
        return DiscriminatorScores(tree_leaf(*root_, x));
    }

private:
    std::string name_;
    std::size_t num_classes_;
    std::unique_ptr<TreeNode> root_;
};

// ---------------------------------------------------------------------------
// Random forest: bootstrap rows and a per-tree feature subset; mean of the
// trees' leaf distributions.

class RandomForestModel final : public TrainedClassifier {
public:
    RandomForestModel(std::string name, std::size_t num_classes,
                      std::vector<std::unique_ptr<TreeNode>> trees)
        : name_(std::move(name)), num_classes_(num_classes), trees_(std::move(trees)) {}

    std::size_t num_classes() const override { return num_classes_; }
    const std::string& name() const override { return name_; }

    DiscriminatorScores score(const FeatureVector& x) const override {
        std::vector<DiscriminatorScores> rows;
        rows.reserve(trees_.size());
        for (const auto& tree : trees_) rows.push_back(DiscriminatorScores(tree_leaf(*tree, x)));
        return mean_scores(rows);
    }

private:
    std::string name_;
    std::size_t num_classes_;
    std::vector<std::unique_ptr<TreeNode>> trees_;
};

// ---------------------------------------------------------------------------
// Boosted depth-1 stumps with the multiclass exponential-weight update.

struct Stump {
    std::size_t feature = 0;
    double threshold = 0.0;
    ClassLabel left_class = 0;
    ClassLabel right_class = 0;

    ClassLabel predict(const FeatureVector& x) const {
        return x[feature] <= threshold ? left_class : right_class;
    }
};

std::optional<Stump> fit_stump(const std::vector<FeatureVector>& xs,
                               const std::vector<ClassLabel>& ys, std::size_t num_classes,
                               const std::vector<double>& w) {
    const std::size_t n = xs.size();
    std::optional<Stump> best;
    double best_correct = -1.0;

    std::vector<std::size_t> order(n);
    std::vector<double> left_w(num_classes);
    std::vector<double> total_w(num_classes, 0.0);
    for (std::size_t i = 0; i < n; ++i) total_w[ys[i]] += w[i];

    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (xs[a][f] != xs[b][f]) return xs[a][f] < xs[b][f];
            return a < b;
        });
        std::fill(left_w.begin(), left_w.end(), 0.0);
        for (std::size_t pos = 0; pos + 1 < n; ++pos) {
            left_w[ys[order[pos]]] += w[order[pos]];
            const double v = xs[order[pos]][f];
            const double next = xs[order[pos + 1]][f];
            if (v == next) continue;
            ClassLabel lc = 0, rc = 0;
            double lbest = -1.0, rbest = -1.0;
            for (std::size_t c = 0; c < num_classes; ++c) {
                if (left_w[c] > lbest) {
                    lbest = left_w[c];
                    lc = c;
                }
                const double rw = total_w[c] - left_w[c];
                if (rw > rbest) {
                    rbest = rw;
                    rc = c;
                }
            }
            const double correct = lbest + rbest;
            if (correct > best_correct) {
                best_correct = correct;
                best = Stump{f, v + 0.5 * (next - v), lc, rc};
            }
        }
    }
    return best;
}

class AdaBoostModel final : public TrainedClassifier {
public:
    AdaBoostModel(std::string name, std::size_t num_classes, std::vector<Stump> stumps,
                  std::vector<double> alphas)
        : name_(std::move(name)), num_classes_(num_classes), stumps_(std::move(stumps)),
          alphas_(std::move(alphas)) {}

    std::size_t num_classes() const override { return num_classes_; }
    const std::string& name() const override { return name_; }

    DiscriminatorScores score(const FeatureVector& x) const override {
        std::vector<double> votes(num_classes_, 0.0);
        for (std::size_t m = 0; m < stumps_.size(); ++m) {
            votes[stumps_[m].predict(x)] += alphas_[m];
        }
        // Softmax over the weighted votes.
        const double peak = *std::max_element(votes.begin(), votes.end());
        double total = 0.0;
        for (double& v : votes) {
            v = std::exp(v - peak);
            total += v;
        }
        for (double& v : votes) v /= total;
        return DiscriminatorScores(std::move(votes));
    }

private:
    std::string name_;
    std::size_t num_classes_;
    std::vector<Stump> stumps_;
    std::vector<double> alphas_;
};

// ---------------------------------------------------------------------------
// Trainers

std::string spec_label(const LearnerSpec& spec, std::initializer_list<const char*> keys,
                       std::initializer_list<double> defaults) {
    std::ostringstream out;
    out << learner_name(spec.kind);
    const char* sep = "(";
    auto d = defaults.begin();
    for (const char* key : keys) {
        out << sep << key << '=' << static_cast<long long>(spec.param(key, *d++));
        sep = ",";
    }
    if (keys.size() > 0) out << ')';
    return out.str();
}

ClassifierPtr train_tree(const LearnerSpec& spec, const LabeledDataset& data) {
    const TreeParams params{static_cast<std::size_t>(spec.param("max_depth", 32)),
                            static_cast<std::size_t>(spec.param("min_leaf", 1))};
    const std::string name = spec_label(spec, {"max_depth", "min_leaf"}, {32, 1});
    if (all_features_constant(data.features)) {
        std::cerr << "[drscreen] " << name
                  << ": all features constant; falling back to a prior-only model\n";
        return std::make_shared<PriorModel>(name, prior_frequencies(data));
    }
    const TreeBuilder builder(data.features, data.labels, data.num_classes, params,
                              all_feature_indices());
    std::vector<std::size_t> indices(data.size());
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    return std::make_shared<DecisionTreeModel>(name, data.num_classes,
                                               builder.build(std::move(indices)));
}

ClassifierPtr train_forest(const LearnerSpec& spec, const LabeledDataset& data) {
    const std::size_t n_trees = static_cast<std::size_t>(spec.param("n_trees", 25));
    const std::uint64_t seed = static_cast<std::uint64_t>(spec.param("seed", 0));
    const bool bootstrap = spec.param("bootstrap", 1) != 0.0;
    const double feature_fraction = spec.param("feature_fraction", 0.7);
    const TreeParams params{static_cast<std::size_t>(spec.param("max_depth", 32)),
                            static_cast<std::size_t>(spec.param("min_leaf", 1))};
    const std::string name = spec_label(spec, {"n_trees", "seed"}, {25, 0});

    if (all_features_constant(data.features)) {
        std::cerr << "[drscreen] " << name
                  << ": all features constant; falling back to a prior-only model\n";
        return std::make_shared<PriorModel>(name, prior_frequencies(data));
    }

    const std::size_t n = data.size();
    const std::size_t n_features = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(feature_fraction * kFeatureCount)), 1,
        kFeatureCount);
    Rng rng(seed);
    std::vector<std::unique_ptr<TreeNode>> trees;
    trees.reserve(n_trees);
    for (std::size_t t = 0; t < n_trees; ++t) {
        std::vector<std::size_t> indices(n);
        if (bootstrap) {
            for (std::size_t i = 0; i < n; ++i) {
                indices[i] = static_cast<std::size_t>(uniform_below(rng, n));
            }
        } else {
            std::iota(indices.begin(), indices.end(), std::size_t{0});
        }
        std::vector<std::size_t> features = all_feature_indices();
        if (n_features < kFeatureCount) {
            deterministic_shuffle(features, rng);
            features.resize(n_features);
            std::sort(features.begin(), features.end());
        }
        const TreeBuilder builder(data.features, data.labels, data.num_classes, params,
                                  std::move(features));
        trees.push_back(builder.build(std::move(indices)));
    }
    return std::make_shared<RandomForestModel>(name, data.num_classes, std::move(trees));
}

ClassifierPtr train_adaboost(const LearnerSpec& spec, const LabeledDataset& data) {
    const std::size_t n_rounds = static_cast<std::size_t>(spec.param("n_rounds", 50));
    const std::string name = spec_label(spec, {"n_rounds"}, {50});
    const std::size_t n = data.size();
    const double m_classes = static_cast<double>(data.num_classes);

    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    std::vector<Stump> stumps;
    std::vector<double> alphas;
    for (std::size_t round = 0; round < n_rounds; ++round) {
        const auto stump = fit_stump(data.features, data.labels, data.num_classes, w);
        if (!stump) break;
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (stump->predict(data.features[i]) != data.labels[i]) err += w[i];
        }
        if (err >= 1.0 - 1.0 / m_classes) break;  // no better than chance
        const double floored = std::max(err, 1e-12);
        const double alpha = std::log((1.0 - floored) / floored) + std::log(m_classes - 1.0);
        stumps.push_back(*stump);
        alphas.push_back(alpha);
        if (err <= 0.0) break;  // perfect stump, nothing left to reweight
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (stump->predict(data.features[i]) != data.labels[i]) {
                w[i] *= std::exp(alpha);
            }
            total += w[i];
        }
        for (double& wi : w) wi /= total;
    }
    if (stumps.empty()) {
        std::cerr << "[drscreen] " << name
                  << ": no usable stump; falling back to a prior-only model\n";
        return std::make_shared<PriorModel>(name, prior_frequencies(data));
    }
    return std::make_shared<AdaBoostModel>(name, data.num_classes, std::move(stumps),
                                           std::move(alphas));
}

}  // namespace

ClassifierPtr train(const LearnerSpec& spec, const LabeledDataset& data) {
    validate_learner_spec(spec);
    require_all_classes(data);
    switch (spec.kind) {
        case LearnerKind::Knn: {
            const std::size_t k = static_cast<std::size_t>(spec.param("k", 5));
            return std::make_shared<KnnModel>(spec_label(spec, {"k"}, {5}), k,
                                              Standardizer::fit(data.features), data);
        }
        case LearnerKind::NaiveBayes:
            return std::make_shared<NaiveBayesModel>(std::string(learner_name(spec.kind)),
                                                     Standardizer::fit(data.features), data);
        case LearnerKind::DecisionTree: return train_tree(spec, data);
        case LearnerKind::RandomForest: return train_forest(spec, data);
        case LearnerKind::AdaBoost: return train_adaboost(spec, data);
    }
    throw RangeError("unknown learner kind");
}

DiscriminatorScores mean_scores(std::span<const DiscriminatorScores> rows) {
    if (rows.empty()) {
        throw RangeError("mean of zero rows");
    }
    const std::size_t m = rows.front().num_classes();
    std::vector<double> mean(m, 0.0);
    for (const auto& row : rows) {
        if (row.num_classes() != m) {
            throw LengthMismatchError("rows disagree on the number of classes");
        }
        for (std::size_t c = 0; c < m; ++c) mean[c] += row[c];
    }
    for (double& v : mean) v /= static_cast<double>(rows.size());
    return DiscriminatorScores(std::move(mean));
}

}  // namespace drscreen
