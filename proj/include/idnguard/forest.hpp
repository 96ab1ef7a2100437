#pragma once

#include "idnguard/training_set.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace idnguard {

/// Deterministic random stream. Bounded draws avoid std distributions,
/// whose output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound).
    std::size_t uniform_index(std::size_t bound);

    /// Stream seed for sub-task `index` of a run seeded with `seed`.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index);

private:
    std::mt19937_64 engine_;
};

/// 1 - sum(p_c^2) for two classes. Throws EmptyPartition when both are zero.
double gini_impurity(std::size_t benign, std::size_t malicious);

/// Gains at or below this are treated as "no improvement", and gains within
/// it of the best so far count as ties.
inline constexpr double split_gain_epsilon = 1e-12;

struct Split {
    std::size_t feature = 0;
    double threshold = 0.0; // rows with value <= threshold go left
    double gain = 0.0;
};

/// Best Gini split of `rows` over `candidate_features`. Thresholds are the
/// midpoints between consecutive distinct values; ties go to the lowest
/// feature index, then the lowest threshold. Each side must keep at least
/// `min_leaf` rows. Returns nullopt if nothing decreases impurity.
std::optional<Split> best_split(const TrainingSet& data, std::span<const std::size_t> rows,
                                std::span<const std::size_t> candidate_features, std::size_t min_leaf = 1);

struct ForestParams {
    std::size_t n_trees = 100;
    std::size_t max_depth = 0;          // 0 = unlimited
    std::size_t min_leaf = 1;
    std::size_t features_per_split = 0; // 0 = ceil(sqrt(arity))
    bool bootstrap = true;
    double threshold = 0.5;             // predict() returns 1 when proba >= threshold
    unsigned threads = 0;               // 0 = hardware concurrency; never affects output

    /// Copy with features_per_split filled in. Throws InvalidParams.
    ForestParams resolved(std::size_t arity) const;
};

struct TreeNode {
    std::int32_t feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t benign = 0;
    std::uint32_t malicious = 0;

    bool is_leaf() const { return feature < 0; }

    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct DecisionTree {
    std::vector<TreeNode> nodes; // nodes[0] is the root
    std::size_t max_depth = 0;
    std::uint64_t training_seed = 0;

    const TreeNode& leaf_for(std::span<const double> x) const;
    /// Malicious fraction of the leaf reached by `x`.
    double score(std::span<const double> x) const;
    std::size_t depth() const;

    friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

/// Grows one tree on `rows` of `data` (duplicates allowed, as in a
/// bootstrap sample). At every node `features_per_split` candidate
/// features are drawn without replacement from `rng`.
DecisionTree grow_tree(const TrainingSet& data, std::span<const std::size_t> rows, const ForestParams& params,
                       Rng& rng);

struct RandomForestModel {
    std::vector<DecisionTree> trees;
    ForestParams params;
    std::uint64_t seed = 0;
    std::vector<std::string> feature_order;
    nlohmann::json run_config = nlohmann::json::object(); // echoed verbatim into the model file

    std::size_t arity() const { return feature_order.size(); }
};

/// Tree i draws its bootstrap sample and feature subsets from
/// Rng(Rng::derive(seed, i)). Throws SingleClassDataset, InvalidParams.
RandomForestModel train_forest(const TrainingSet& data, const ForestParams& params, std::uint64_t seed,
                               std::vector<std::string> feature_order);

/// Mean leaf malicious-fraction over the trees. Throws ArityMismatch.
double predict_proba(const RandomForestModel& model, std::span<const double> x);

int predict(const RandomForestModel& model, std::span<const double> x);
int predict(const RandomForestModel& model, std::span<const double> x, double threshold);

/// JSON model document (format "idnguard-forest", version 1).
std::string serialize_model(const RandomForestModel& model);

/// Throws ModelFormat on malformed documents and FeatureOrderMismatch when
/// `expected_order` is non-empty and differs from the stored order.
RandomForestModel parse_model(std::string_view text, const std::vector<std::string>& expected_order = {});

} // namespace idnguard
