#include "idnguard/forest.hpp"

#include "idnguard/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

namespace idnguard {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Midpoint of a < b such that a stays left and b goes right under "<=".
double split_threshold(double a, double b) {
    const double m = std::midpoint(a, b);
    return m < b ? m : a;
}

std::vector<std::size_t> sample_features(std::size_t arity, std::size_t count, Rng& rng) {
    std::vector<std::size_t> pool(arity);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    count = std::min(count, arity);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + rng.uniform_index(arity - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    std::sort(pool.begin(), pool.end());
    return pool;
}

class TreeBuilder {
public:
    TreeBuilder(const TrainingSet& data, const ForestParams& params, Rng& rng, DecisionTree& tree)
        : data_(data), params_(params), rng_(rng), tree_(tree) {}

    std::int32_t build(std::vector<std::size_t> rows, std::size_t depth) {
        TreeNode node;
        for (std::size_t r : rows) {
            (data_.labels[r] ? node.malicious : node.benign) += 1;
        }
        const auto index = static_cast<std::int32_t>(tree_.nodes.size());
        tree_.nodes.push_back(node);

        const bool pure = node.benign == 0 || node.malicious == 0;
        const bool depth_reached = params_.max_depth != 0 && depth >= params_.max_depth;
        if (pure || depth_reached || rows.size() < 2 * params_.min_leaf) {
            return index;
        }
        const auto candidates = sample_features(data_.arity, params_.features_per_split, rng_);
        const auto split = best_split(data_, rows, candidates, params_.min_leaf);
        if (!split) {
            return index;
        }

        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        for (std::size_t r : rows) {
            (data_.at(r, split->feature) <= split->threshold ? left : right).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        const std::int32_t l = build(std::move(left), depth + 1);
        const std::int32_t r = build(std::move(right), depth + 1);
        auto& stored = tree_.nodes[static_cast<std::size_t>(index)];
        stored.feature = static_cast<std::int32_t>(split->feature);
        stored.threshold = split->threshold;
        stored.left = l;
        stored.right = r;
        return index;
    }

private:
    const TrainingSet& data_;
    const ForestParams& params_;
    Rng& rng_;
    DecisionTree& tree_;
};

} // namespace

std::size_t Rng::uniform_index(std::size_t bound) {
    if (bound <= 1) {
        return 0;
    }
    const auto b = static_cast<std::uint64_t>(bound);
    const std::uint64_t reject_below = (0 - b) % b;
    std::uint64_t x = next();
    while (x < reject_below) {
        x = next();
    }
    return static_cast<std::size_t>(x % b);
}

std::uint64_t Rng::derive(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed ^ splitmix64(index));
}

double gini_impurity(std::size_t benign, std::size_t malicious) {
    const std::size_t n = benign + malicious;
    if (n == 0) {
        throw Error(Errc::EmptyPartition, "gini of an empty partition");
    }
    const double p0 = static_cast<double>(benign) / static_cast<double>(n);
    const double p1 = static_cast<double>(malicious) / static_cast<double>(n);
    return 1.0 - (p0 * p0 + p1 * p1);
}

std::optional<Split> best_split(const TrainingSet& data, std::span<const std::size_t> rows,
                                std::span<const std::size_t> candidate_features, std::size_t min_leaf) {
    const std::size_t n = rows.size();
    if (n < 2 || candidate_features.empty()) {
        return std::nullopt;
    }
    min_leaf = std::max<std::size_t>(min_leaf, 1);
    std::size_t total_mal = 0;
    for (std::size_t r : rows) {
        total_mal += data.labels[r];
    }
    const std::size_t total_ben = n - total_mal;
    if (total_mal == 0 || total_ben == 0) {
        return std::nullopt;
    }
    const double parent = gini_impurity(total_ben, total_mal);
    const auto dn = static_cast<double>(n);

    std::vector<std::size_t> features(candidate_features.begin(), candidate_features.end());
    std::sort(features.begin(), features.end());
    features.erase(std::unique(features.begin(), features.end()), features.end());

    std::optional<Split> best;
    std::vector<std::pair<double, std::uint8_t>> column(n);
    for (std::size_t f : features) {
        for (std::size_t i = 0; i < n; ++i) {
            column[i] = {data.at(rows[i], f), data.labels[rows[i]]};
        }
        std::sort(column.begin(), column.end());

        std::size_t left_mal = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            left_mal += column[i].second;
            if (column[i].first == column[i + 1].first) {
                continue;
            }
            const std::size_t nl = i + 1;
            const std::size_t nr = n - nl;
            if (nl < min_leaf || nr < min_leaf) {
                continue;
            }
            const std::size_t right_mal = total_mal - left_mal;
            const double gain = parent - (static_cast<double>(nl) / dn) * gini_impurity(nl - left_mal, left_mal) -
                                (static_cast<double>(nr) / dn) * gini_impurity(nr - right_mal, right_mal);
            if (gain <= split_gain_epsilon) {
                continue;
            }
            if (!best || gain > best->gain + split_gain_epsilon) {
                best = Split{f, split_threshold(column[i].first, column[i + 1].first), gain};
            }
        }
    }
    return best;
}

ForestParams ForestParams::resolved(std::size_t arity) const {
    if (arity == 0) {
        throw Error(Errc::InvalidParams, "feature arity is zero");
    }
    if (n_trees == 0) {
        throw Error(Errc::InvalidParams, "n_trees must be at least 1");
    }
    if (min_leaf == 0) {
        throw Error(Errc::InvalidParams, "min_leaf must be at least 1");
    }
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw Error(Errc::InvalidParams, "threshold must lie in [0, 1]");
    }
    ForestParams out = *this;
    if (out.features_per_split == 0) {
        out.features_per_split = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(arity))));
    }
    if (out.features_per_split > arity) {
        throw Error(Errc::InvalidParams, "features_per_split exceeds feature arity");
    }
    return out;
}

const TreeNode& DecisionTree::leaf_for(std::span<const double> x) const {
    const TreeNode* node = &nodes.front();
    while (!node->is_leaf()) {
        const auto next = x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left : node->right;
        node = &nodes[static_cast<std::size_t>(next)];
    }
    return *node;
}

double DecisionTree::score(std::span<const double> x) const {
    const TreeNode& leaf = leaf_for(x);
    return static_cast<double>(leaf.malicious) / static_cast<double>(leaf.benign + leaf.malicious);
}

std::size_t DecisionTree::depth() const {
    std::vector<std::size_t> level(nodes.size(), 0);
    std::size_t deepest = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        deepest = std::max(deepest, level[i]);
        if (!nodes[i].is_leaf()) {
            level[static_cast<std::size_t>(nodes[i].left)] = level[i] + 1;
            level[static_cast<std::size_t>(nodes[i].right)] = level[i] + 1;
        }
    }
    return deepest;
}

DecisionTree grow_tree(const TrainingSet& data, std::span<const std::size_t> rows, const ForestParams& params,
                       Rng& rng) {
    if (rows.empty()) {
        throw Error(Errc::EmptyPartition, "cannot grow a tree on zero rows");
    }
    const ForestParams p = params.resolved(data.arity);
    DecisionTree tree;
    tree.max_depth = p.max_depth;
    TreeBuilder builder(data, p, rng, tree);
    builder.build(std::vector<std::size_t>(rows.begin(), rows.end()), 0);
    return tree;
}

RandomForestModel train_forest(const TrainingSet& data, const ForestParams& params, std::uint64_t seed,
                               std::vector<std::string> feature_order) {
    const std::size_t mal = static_cast<std::size_t>(std::count(data.labels.begin(), data.labels.end(), 1));
    if (mal == 0 || mal == data.size()) {
        throw Error(Errc::SingleClassDataset, "training data needs both classes");
    }
    if (!feature_order.empty() && feature_order.size() != data.arity) {
        throw Error(Errc::ArityMismatch, "feature_order has " + std::to_string(feature_order.size()) +
                                             " names for " + std::to_string(data.arity) + " columns");
    }

    RandomForestModel model;
    model.params = params.resolved(data.arity);
    model.seed = seed;
    model.feature_order = std::move(feature_order);
    model.trees.resize(model.params.n_trees);

    const std::size_t n = data.size();
    auto train_one = [&](std::size_t t) {
        const std::uint64_t tree_seed = Rng::derive(seed, t);
        Rng rng(tree_seed);
        std::vector<std::size_t> rows(n);
        if (model.params.bootstrap) {
            for (auto& r : rows) {
                r = rng.uniform_index(n);
            }
        } else {
            std::iota(rows.begin(), rows.end(), std::size_t{0});
        }
        DecisionTree tree = grow_tree(data, rows, model.params, rng);
        tree.training_seed = tree_seed;
        model.trees[t] = std::move(tree);
    };

    unsigned workers = model.params.threads ? model.params.threads : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(model.params.n_trees)));
    if (workers == 1) {
        for (std::size_t t = 0; t < model.params.n_trees; ++t) {
            train_one(t);
        }
        return model;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t t = next++; t < model.params.n_trees && !failed; t = next++) {
                    try {
                        train_one(t);
                    } catch (...) {
                        if (!failed.exchange(true)) {
                            failure = std::current_exception();
                        }
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return model;
}

double predict_proba(const RandomForestModel& model, std::span<const double> x) {
    if (x.size() != model.arity()) {
        throw Error(Errc::ArityMismatch, "vector has " + std::to_string(x.size()) + " features, model expects " +
                                             std::to_string(model.arity()));
    }
    if (model.trees.empty()) {
        throw Error(Errc::ModelFormat, "model has no trees");
    }
    double sum = 0.0;
    for (const auto& tree : model.trees) {
        sum += tree.score(x);
    }
    return sum / static_cast<double>(model.trees.size());
}

int predict(const RandomForestModel& model, std::span<const double> x, double threshold) {
    return predict_proba(model, x) >= threshold ? 1 : 0;
}

int predict(const RandomForestModel& model, std::span<const double> x) {
    return predict(model, x, model.params.threshold);
}

std::string serialize_model(const RandomForestModel& model) {
    using nlohmann::json;
    json doc;
    doc["format"] = "idnguard-forest";
    doc["version"] = 1;
    doc["seed"] = model.seed;
    doc["params"] = {
        {"n_trees", model.params.n_trees},
        {"max_depth", model.params.max_depth},
        {"min_leaf", model.params.min_leaf},
        {"features_per_split", model.params.features_per_split},
        {"bootstrap", model.params.bootstrap},
        {"threshold", model.params.threshold},
    };
    doc["feature_order"] = model.feature_order;
    doc["run_config"] = model.run_config;
    json trees = json::array();
    for (const auto& tree : model.trees) {
        json nodes = json::array();
        for (const auto& n : tree.nodes) {
            nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.benign, n.malicious}));
        }
        trees.push_back({{"training_seed", tree.training_seed}, {"max_depth", tree.max_depth}, {"nodes", nodes}});
    }
    doc["trees"] = std::move(trees);
    return doc.dump(1) + "\n";
}

RandomForestModel parse_model(std::string_view text, const std::vector<std::string>& expected_order) {
    using nlohmann::json;
    RandomForestModel model;
    try {
        const json doc = json::parse(text);
        if (doc.at("format").get<std::string>() != "idnguard-forest") {
            throw Error(Errc::ModelFormat, "not an idnguard forest document");
        }
        if (doc.at("version").get<int>() != 1) {
            throw Error(Errc::ModelFormat, "unsupported model version");
        }
        model.seed = doc.at("seed").get<std::uint64_t>();
        const auto& p = doc.at("params");
        model.params.n_trees = p.at("n_trees").get<std::size_t>();
        model.params.max_depth = p.at("max_depth").get<std::size_t>();
        model.params.min_leaf = p.at("min_leaf").get<std::size_t>();
        model.params.features_per_split = p.at("features_per_split").get<std::size_t>();
        model.params.bootstrap = p.at("bootstrap").get<bool>();
        model.params.threshold = p.at("threshold").get<double>();
        model.feature_order = doc.at("feature_order").get<std::vector<std::string>>();
        if (doc.contains("run_config")) {
            model.run_config = doc["run_config"];
        }
        for (const auto& t : doc.at("trees")) {
            DecisionTree tree;
            tree.training_seed = t.at("training_seed").get<std::uint64_t>();
            tree.max_depth = t.at("max_depth").get<std::size_t>();
            for (const auto& n : t.at("nodes")) {
                if (!n.is_array() || n.size() != 6) {
                    throw Error(Errc::ModelFormat, "node must have 6 fields");
                }
                tree.nodes.push_back({n[0].get<std::int32_t>(), n[1].get<double>(), n[2].get<std::int32_t>(),
                                      n[3].get<std::int32_t>(), n[4].get<std::uint32_t>(),
                                      n[5].get<std::uint32_t>()});
            }
            model.trees.push_back(std::move(tree));
        }
    } catch (const json::exception& e) {
        throw Error(Errc::ModelFormat, e.what());
    }

    if (model.trees.size() != model.params.n_trees || model.trees.empty()) {
        throw Error(Errc::ModelFormat, "tree count does not match n_trees");
    }
    for (const auto& tree : model.trees) {
        const auto count = static_cast<std::int32_t>(tree.nodes.size());
        if (count == 0) {
            throw Error(Errc::ModelFormat, "empty tree");
        }
        for (std::int32_t i = 0; i < count; ++i) {
            const auto& n = tree.nodes[static_cast<std::size_t>(i)];
            if (n.is_leaf()) {
                if (n.benign + n.malicious == 0) {
                    throw Error(Errc::ModelFormat, "leaf without samples");
                }
                continue;
            }
            // children always follow their parent, which rules out cycles
            if (static_cast<std::size_t>(n.feature) >= model.feature_order.size() || n.left <= i || n.right <= i ||
                n.left >= count || n.right >= count) {
                throw Error(Errc::ModelFormat, "malformed internal node");
            }
        }
    }
    if (!expected_order.empty() && model.feature_order != expected_order) {
        throw Error(Errc::FeatureOrderMismatch, "model feature order differs from this build's feature order");
    }
    return model;
}

} // namespace idnguard
