#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace idnguard {

/// Row-major numeric matrix with one binary label per row
/// (1 = malicious, 0 = benign).
struct TrainingSet {
    std::size_t arity = 0;
    std::vector<double> values;
    std::vector<std::uint8_t> labels;

    std::size_t size() const { return labels.size(); }
    std::span<const double> row(std::size_t i) const { return {values.data() + i * arity, arity}; }
    double at(std::size_t row_index, std::size_t feature) const { return values[row_index * arity + feature]; }

    void push_back(std::span<const double> row, std::uint8_t label) {
        values.insert(values.end(), row.begin(), row.end());
        labels.push_back(label);
    }

    /// Rows `indices` in the given order.
    TrainingSet subset(std::span<const std::size_t> indices) const {
        TrainingSet out;
        out.arity = arity;
        out.values.reserve(indices.size() * arity);
        out.labels.reserve(indices.size());
        for (std::size_t i : indices) {
            out.push_back(row(i), labels[i]);
        }
        return out;
    }
};

} // namespace idnguard
