#pragma once

#include "idnguard/enrichment.hpp"
#include "idnguard/features.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace idnguard::synthetic {

/// Generator for a labeled domain corpus whose classes differ the way
/// blocklisted and top-ranked domains usually do.
///
/// Malicious: 2-4 hyphenated tokens plus a 2-4 digit number, optional
/// subdomains, risky TLDs, and in `confusable_rate` of cases a Latin brand
/// name with one or two Greek/Cyrillic look-alikes substituted. Age 0-6
/// months, 3-5 scanners out of 5.
///
/// Benign: one or two dictionary words on a common TLD, plain ASCII. Age
/// 60-300 months, no scanner flags.
///
/// After generation exactly round(label_noise * total) labels are flipped.
struct Options {
    std::size_t malicious = 500;
    std::size_t benign = 500;
    double label_noise = 0.02;
    double confusable_rate = 0.3;
};

struct Record {
    std::string domain; // UTF-8; confusable records carry Unicode labels
    int label = 0;
    int age_months = 0;
    int scanner_rate = 0;
    bool flipped = false;
};

std::vector<Record> generate(const Options& options, std::uint64_t seed);

/// Brand domains used as the whitelist index for spoof features.
const std::vector<std::string>& brand_domains();

/// Feature config: project default risky TLDs and tokens, whitelist index
/// built from brand_domains().
FeatureConfig default_feature_config();

/// Writes a fixture tree under `dir`: blocklist.txt (hosts format),
/// whitelist.csv (rank,domain), ratings.csv and whois/<domain>.txt files
/// whose creation dates reproduce each record's age at `reference`
/// (creation day-of-month is clamped to 28).
void write_fixtures(const std::filesystem::path& dir, const std::vector<Record>& records, const Date& reference);

} // namespace idnguard::synthetic
