#pragma once

#include "idnguard/confusables.hpp"
#include "idnguard/domain.hpp"
#include "idnguard/enrichment.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace idnguard {

/// Fixed-order numeric description of one domain. Field order here is the
/// column order of feature CSVs and the input order of the classifier.
struct FeatureVector {
    int name_length = 0;
    int dot_count = 0;
    int hyphen_count = 0;
    int digit_count = 0;
    double digit_ratio = 0.0;
    int max_char_run = 0;
    int max_char_freq = 0;
    int repeated_digit_flag = 0;
    int suspicious_tld_flag = 0;
    int unethical_token_flag = 0;
    int whitelist_member_flag = 0;
    int brand_embedding_flag = 0;
    int confusable_count = 0;
    int confusable_spoof_flag = 0;
    int domain_age_months = unknown_age;
    int scanner_rate = unknown_rate;

    static constexpr std::size_t arity = 16;

    std::array<double, arity> to_array() const;

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

inline constexpr std::array<std::string_view, FeatureVector::arity> feature_names = {
    "name_length",          "dot_count",           "hyphen_count",
    "digit_count",          "digit_ratio",         "max_char_run",
    "max_char_freq",        "repeated_digit_flag", "suspicious_tld_flag",
    "unethical_token_flag", "whitelist_member_flag", "brand_embedding_flag",
    "confusable_count",     "confusable_spoof_flag", "domain_age_months",
    "scanner_rate",
};

/// One-line human explanation per feature, same order as feature_names.
extern const std::array<std::string_view, FeatureVector::arity> feature_descriptions;

std::vector<std::string> feature_order();

/// More dots than this is the commonly cited alert level for a domain.
inline constexpr int dot_alert_level = 3;

struct WhitelistIndex {
    std::set<std::string> domains;       // exact ASCII domains
    std::set<std::string> brand_labels;  // second-level labels

    void add(const DomainName& domain);
};

struct FeatureConfig {
    std::set<std::string> tld_risk_set;
    std::set<std::string> unethical_tokens;
    WhitelistIndex whitelist;
    std::size_t min_brand_length = 4;

    /// Throws Error{InvalidEntry} when tokens are empty/uppercase or
    /// min_brand_length < 4.
    void validate() const;
};

/// Project-chosen risky TLDs and abuse tokens; the same lists ship in
/// config/tld-risk.txt and config/tokens.txt.
std::set<std::string> default_tld_risk_set();
std::set<std::string> default_unethical_tokens();

struct BasicFeatures {
    int name_length;
    int dot_count;
    int hyphen_count;
    int digit_count;
    double digit_ratio;
};

struct CharIndicators {
    int max_char_run;
    int max_char_freq;
    int repeated_digit_flag;
};

struct TokenFeatures {
    int suspicious_tld_flag;
    int unethical_token_flag;
    int whitelist_member_flag;
    int brand_embedding_flag;
};

struct IdnFeatures {
    int confusable_count;
    int confusable_spoof_flag;
};

BasicFeatures compute_basic(const DomainName& domain);

/// Over the ASCII form with dots excluded; a dot ends a run.
CharIndicators compute_char_indicators(const DomainName& domain);

TokenFeatures compute_token_features(const DomainName& domain, const FeatureConfig& config);

IdnFeatures compute_idn_features(const DomainName& domain, const ConfusableTable& table, const FeatureConfig& config);

/// Missing enrichment leaves age and rate at -1.
FeatureVector assemble_feature_vector(const DomainName& domain, const std::optional<EnrichmentResult>& enrichment,
                                      const FeatureConfig& config, const ConfusableTable& table);

} // namespace idnguard
