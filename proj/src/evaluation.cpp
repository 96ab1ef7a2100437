#include "idnguard/evaluation.hpp"

#include "idnguard/error.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

namespace idnguard {

double Confusion::accuracy() const {
    return total() == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(total());
}

double Confusion::fpr() const {
    return fp + tn == 0 ? 0.0 : static_cast<double>(fp) / static_cast<double>(fp + tn);
}

double Confusion::tpr() const {
    return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

void Confusion::add(int truth, int predicted) {
    if (truth) {
        (predicted ? tp : fn) += 1;
    } else {
        (predicted ? fp : tn) += 1;
    }
}

std::vector<std::vector<std::size_t>> k_fold_split(std::span<const std::uint8_t> labels, std::size_t k,
                                                   std::uint64_t seed) {
    if (k < 2) {
        throw Error(Errc::InvalidParams, "k must be at least 2");
    }
    if (labels.size() < k) {
        throw Error(Errc::TooFewRecords,
                    std::to_string(labels.size()) + " records for " + std::to_string(k) + " folds");
    }
    std::vector<std::vector<std::size_t>> folds(k);
    Rng rng(seed);
    std::size_t slot = 0;
    for (std::uint8_t cls : {std::uint8_t{0}, std::uint8_t{1}}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == cls) {
                members.push_back(i);
            }
        }
        for (std::size_t i = members.size(); i > 1; --i) {
            std::swap(members[i - 1], members[rng.uniform_index(i)]);
        }
        for (std::size_t idx : members) {
            folds[slot].push_back(idx);
            slot = (slot + 1) % k;
        }
    }
    for (auto& fold : folds) {
        std::sort(fold.begin(), fold.end());
    }
    return folds;
}

double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    if (scores.size() != labels.size()) {
        throw Error(Errc::ArityMismatch, "scores and labels differ in length");
    }
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double positive_rank_sum = 0.0;
    std::size_t positives = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) {
            ++j;
        }
        // ranks i+1 .. j share their average
        const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t) {
            if (labels[order[t]]) {
                positive_rank_sum += rank;
                ++positives;
            }
        }
        i = j;
    }
    const std::size_t negatives = n - positives;
    if (positives == 0 || negatives == 0) {
        throw Error(Errc::SingleClassInput, "AUC needs both classes");
    }
    const double np = static_cast<double>(positives);
    const double u = positive_rank_sum - np * (np + 1.0) / 2.0;
    return u / (np * static_cast<double>(negatives));
}

EvaluationReport cross_validate(const TrainingSet& data, const ForestParams& params, std::size_t k,
                                std::uint64_t seed, const std::vector<std::string>& feature_order) {
    const auto folds = k_fold_split(data.labels, k, seed);
    const ForestParams resolved = params.resolved(data.arity);

    EvaluationReport report;
    std::vector<double> pooled_scores;
    std::vector<std::uint8_t> pooled_labels;
    std::vector<bool> held_out(data.size());
    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::fill(held_out.begin(), held_out.end(), false);
        for (std::size_t i : folds[f]) {
            held_out[i] = true;
        }
        std::vector<std::size_t> train_rows;
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (!held_out[i]) {
                train_rows.push_back(i);
            }
        }
        const auto model = train_forest(data.subset(train_rows), resolved, Rng::derive(seed, f + 1), feature_order);

        FoldResult fold;
        for (std::size_t i : folds[f]) {
            const double score = predict_proba(model, data.row(i));
            const int predicted = score >= resolved.threshold ? 1 : 0;
            fold.confusion.add(data.labels[i], predicted);
            pooled_scores.push_back(score);
            pooled_labels.push_back(data.labels[i]);
        }
        fold.accuracy = fold.confusion.accuracy();
        report.confusion.tp += fold.confusion.tp;
        report.confusion.fp += fold.confusion.fp;
        report.confusion.tn += fold.confusion.tn;
        report.confusion.fn += fold.confusion.fn;
        report.per_fold.push_back(fold);
    }

    double acc_sum = 0.0;
    for (const auto& fold : report.per_fold) {
        acc_sum += fold.accuracy;
    }
    report.mean_accuracy = acc_sum / static_cast<double>(report.per_fold.size());
    report.fpr = report.confusion.fpr();
    report.tpr = report.confusion.tpr();
    report.auc = roc_auc(pooled_scores, pooled_labels);
    report.config_echo = {
        {"k", k},
        {"seed", seed},
        {"params",
         {{"n_trees", resolved.n_trees},
          {"max_depth", resolved.max_depth},
          {"min_leaf", resolved.min_leaf},
          {"features_per_split", resolved.features_per_split},
          {"bootstrap", resolved.bootstrap},
          {"threshold", resolved.threshold}}},
        {"records", data.size()},
    };
    return report;
}

nlohmann::json EvaluationReport::to_json() const {
    using nlohmann::json;
    json folds = json::array();
    for (const auto& f : per_fold) {
        folds.push_back({{"accuracy", f.accuracy},
                         {"tp", f.confusion.tp},
                         {"fp", f.confusion.fp},
                         {"tn", f.confusion.tn},
                         {"fn", f.confusion.fn}});
    }
    return {
        {"format", "idnguard-evaluation"},
        {"version", 1},
        {"config", config_echo},
        {"per_fold", folds},
        {"mean_accuracy", mean_accuracy},
        {"fpr", fpr},
        {"tpr", tpr},
        {"auc", auc},
        {"confusion", {{"tp", confusion.tp}, {"fp", confusion.fp}, {"tn", confusion.tn}, {"fn", confusion.fn}}},
    };
}

std::string EvaluationReport::to_table() const {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof line, "%-6s %6s %6s %6s %6s %9s\n", "fold", "tp", "fp", "tn", "fn", "accuracy");
    out += line;
    for (std::size_t i = 0; i < per_fold.size(); ++i) {
        const auto& f = per_fold[i];
        std::snprintf(line, sizeof line, "%-6zu %6zu %6zu %6zu %6zu %9.4f\n", i + 1, f.confusion.tp,
                      f.confusion.fp, f.confusion.tn, f.confusion.fn, f.accuracy);
        out += line;
    }
    std::snprintf(line, sizeof line, "%-6s %6zu %6zu %6zu %6zu %9.4f\n", "all", confusion.tp, confusion.fp,
                  confusion.tn, confusion.fn, confusion.accuracy());
    out += line;
    std::snprintf(line, sizeof line, "mean accuracy %.4f  fpr %.4f  tpr %.4f  auc %.4f\n", mean_accuracy, fpr, tpr,
                  auc);
    out += line;
    return out;
}

} // namespace idnguard
