#pragma once

#include "idnguard/domain.hpp"
#include "idnguard/features.hpp"
#include "idnguard/training_set.hpp"

#include <array>
#include <cstddef>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace idnguard {

enum class Label : int { Benign = 0, Malicious = 1 };

struct LabeledRecord {
    DomainName domain;
    Label label = Label::Malicious;
    std::string source; // "<file>:<line>"
};

/// Records from one list file plus what was skipped.
struct LoadResult {
    std::vector<LabeledRecord> records;
    std::size_t skipped = 0;
    std::vector<std::string> warnings;
};

/// Hosts-format blocklist: "<ip> <name> [<name>...]" or a bare name per
/// line, '#' comments. Loopback aliases such as "localhost" are ignored.
/// Throws FileNotFound, EmptyListError.
LoadResult load_hosts_blocklist(const std::filesystem::path& path);

/// PhishTank-style CSV with a "url" column; hosts deduplicated within the
/// file. Throws FileNotFound, MissingColumn.
LoadResult load_phishtank_csv(const std::filesystem::path& path);

/// "rank,domain" CSV; the first `top_n` valid domains by ascending rank. A
/// non-numeric first row is treated as a header.
/// Throws FileNotFound, MalformedRow, InvalidParams (top_n == 0).
LoadResult load_ranked_whitelist(const std::filesystem::path& path, std::size_t top_n);

struct LabeledDataset {
    std::vector<LabeledRecord> records; // sorted by ASCII domain
    std::vector<FeatureVector> vectors; // parallel to records once extracted
    std::array<std::size_t, 2> class_counts{}; // indexed by Label
    std::vector<std::string> conflicts;       // domains dropped for carrying both labels

    std::size_t size() const { return records.size(); }
    TrainingSet training_set() const;
};

/// Merges record lists. Duplicates collapse to one record (the
/// lexicographically smallest source is kept); a domain seen with both
/// labels is dropped and listed in `conflicts`. Throws EmptyClass.
LabeledDataset build_dataset(const std::vector<std::vector<LabeledRecord>>& blacklists,
                             const std::vector<std::vector<LabeledRecord>>& whitelists);

// --- feature CSV ------------------------------------------------------------

/// Header: domain, the feature columns in fixed order, label, source.
void write_feature_csv(std::ostream& out, const LabeledDataset& dataset);

/// Labeled feature table as read back from CSV.
struct FeatureTable {
    std::vector<std::string> domains;
    TrainingSet data;
};

/// Reads a feature CSV produced by write_feature_csv. Throws FileNotFound,
/// MissingColumn (label or a feature column absent), MalformedRow.
FeatureTable read_feature_csv(const std::filesystem::path& path);

} // namespace idnguard
