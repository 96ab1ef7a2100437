#pragma once

#include "idnguard/forest.hpp"
#include "idnguard/training_set.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace idnguard {

struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
    double accuracy() const;
    double fpr() const; // fp / (fp + tn); 0 when there are no negatives
    double tpr() const; // tp / (tp + fn); 0 when there are no positives
    void add(int truth, int predicted);

    friend bool operator==(const Confusion&, const Confusion&) = default;
};

struct FoldResult {
    Confusion confusion;
    double accuracy = 0.0;
};

struct EvaluationReport {
    std::vector<FoldResult> per_fold;
    double mean_accuracy = 0.0; // mean of per-fold accuracies
    double fpr = 0.0;           // over the aggregate confusion
    double tpr = 0.0;
    double auc = 0.0;           // pooled held-out scores
    Confusion confusion;
    nlohmann::json config_echo = nlohmann::json::object();

    nlohmann::json to_json() const;
    /// Fixed-width per-fold table followed by the aggregate line.
    std::string to_table() const;
};

/// Stratified, seeded k-fold partition of row indices. Each class is
/// shuffled and dealt round-robin, continuing the rotation across classes,
/// so per-class fold sizes differ by at most one. Folds are sorted.
/// Throws InvalidParams (k < 2) and TooFewRecords (size < k).
std::vector<std::vector<std::size_t>> k_fold_split(std::span<const std::uint8_t> labels, std::size_t k,
                                                   std::uint64_t seed);

/// Mann-Whitney AUC with tied scores sharing their average rank.
/// Throws SingleClassInput.
double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

/// Fold f trains with seed Rng::derive(seed, f + 1); the split itself
/// uses `seed`.
EvaluationReport cross_validate(const TrainingSet& data, const ForestParams& params, std::size_t k,
                                std::uint64_t seed, const std::vector<std::string>& feature_order);

} // namespace idnguard
