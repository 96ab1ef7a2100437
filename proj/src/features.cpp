#include "idnguard/features.hpp"

#include "idnguard/error.hpp"

#include <algorithm>

namespace idnguard {

const std::array<std::string_view, FeatureVector::arity> feature_descriptions = {
    "characters in the ASCII domain, dots included",
    "number of dots",
    "number of hyphens",
    "number of ASCII digits",
    "digits / length",
    "longest run of one repeated character",
    "highest occurrence count of a single character",
    "some digit occurs at least twice",
    "TLD is in the risky-TLD list",
    "contains a configured unethical token",
    "exact domain is whitelisted",
    "embeds a whitelisted brand label without being whitelisted",
    "number of Greek/Cyrillic characters resembling Latin letters",
    "confusable skeleton equals a whitelisted domain",
    "months since WHOIS creation date (-1 unknown)",
    "scanners flagging the domain malicious, out of 5 (-1 unknown)",
};

std::array<double, FeatureVector::arity> FeatureVector::to_array() const {
    return {
        static_cast<double>(name_length),          static_cast<double>(dot_count),
        static_cast<double>(hyphen_count),         static_cast<double>(digit_count),
        digit_ratio,                               static_cast<double>(max_char_run),
        static_cast<double>(max_char_freq),        static_cast<double>(repeated_digit_flag),
        static_cast<double>(suspicious_tld_flag),  static_cast<double>(unethical_token_flag),
        static_cast<double>(whitelist_member_flag), static_cast<double>(brand_embedding_flag),
        static_cast<double>(confusable_count),     static_cast<double>(confusable_spoof_flag),
        static_cast<double>(domain_age_months),    static_cast<double>(scanner_rate),
    };
}

std::vector<std::string> feature_order() {
    return {feature_names.begin(), feature_names.end()};
}

std::set<std::string> default_tld_risk_set() {
    return {"tk", "xyz", "top", "pw", "cc", "ws", "info", "biz", "ml", "ga", "cf", "gq", "club", "online", "site"};
}

std::set<std::string> default_unethical_tokens() {
    return {"casino", "poker", "porn", "xxx", "sex", "adult", "viagra", "cialis", "pharma",
            "loan", "crack", "warez", "torrent", "bonus", "lottery"};
}

void WhitelistIndex::add(const DomainName& domain) {
    domains.insert(domain.ascii());
    if (const auto sld = second_level_label(domain); !sld.empty()) {
        brand_labels.emplace(sld);
    }
}

void FeatureConfig::validate() const {
    if (min_brand_length < 4) {
        throw Error(Errc::InvalidEntry, "min_brand_length must be at least 4");
    }
    auto check = [](const std::set<std::string>& set, const char* what) {
        for (const auto& s : set) {
            if (s.empty() || std::any_of(s.begin(), s.end(), [](char c) { return c >= 'A' && c <= 'Z'; })) {
                throw Error(Errc::InvalidEntry, std::string(what) + " entry '" + s + "' must be lowercase and non-empty");
            }
        }
    };
    check(tld_risk_set, "tld");
    check(unethical_tokens, "token");
}

BasicFeatures compute_basic(const DomainName& domain) {
    const std::string name = domain.ascii();
    BasicFeatures f{};
    f.name_length = static_cast<int>(name.size());
    for (char c : name) {
        f.dot_count += c == '.';
        f.hyphen_count += c == '-';
        f.digit_count += c >= '0' && c <= '9';
    }
    f.digit_ratio = name.empty() ? 0.0 : static_cast<double>(f.digit_count) / static_cast<double>(name.size());
    return f;
}

CharIndicators compute_char_indicators(const DomainName& domain) {
    std::array<int, 256> freq{};
    int best_run = 0;
    for (const auto& label : domain.ascii_labels) {
        int run = 0;
        char prev = '\0';
        for (char c : label) {
            run = (run > 0 && c == prev) ? run + 1 : 1;
            prev = c;
            best_run = std::max(best_run, run);
            ++freq[static_cast<unsigned char>(c)];
        }
    }
    CharIndicators f{};
    f.max_char_run = best_run;
    f.max_char_freq = *std::max_element(freq.begin(), freq.end());
    f.repeated_digit_flag = std::any_of(freq.begin() + '0', freq.begin() + '9' + 1, [](int n) { return n >= 2; });
    return f;
}

TokenFeatures compute_token_features(const DomainName& domain, const FeatureConfig& config) {
    const std::string name = domain.ascii();
    TokenFeatures f{};
    f.suspicious_tld_flag = config.tld_risk_set.contains(domain.tld);
    f.unethical_token_flag = std::any_of(config.unethical_tokens.begin(), config.unethical_tokens.end(),
                                         [&](const std::string& t) { return name.find(t) != std::string::npos; });
    f.whitelist_member_flag = config.whitelist.domains.contains(name);
    if (!f.whitelist_member_flag) {
        f.brand_embedding_flag =
            std::any_of(config.whitelist.brand_labels.begin(), config.whitelist.brand_labels.end(),
                        [&](const std::string& brand) {
                            return brand.size() >= config.min_brand_length && brand.size() < name.size() &&
                                   name.find(brand) != std::string::npos;
                        });
    }
    return f;
}

IdnFeatures compute_idn_features(const DomainName& domain, const ConfusableTable& table,
                                 const FeatureConfig& config) {
    IdnFeatures f{};
    f.confusable_count = static_cast<int>(find_confusables(domain, table).size());
    if (!config.whitelist.domains.contains(domain.ascii())) {
        const std::string skel = skeleton(domain, table);
        f.confusable_spoof_flag = skel != domain.unicode() && config.whitelist.domains.contains(skel);
    }
    return f;
}

FeatureVector assemble_feature_vector(const DomainName& domain, const std::optional<EnrichmentResult>& enrichment,
                                      const FeatureConfig& config, const ConfusableTable& table) {
    const auto basic = compute_basic(domain);
    const auto chars = compute_char_indicators(domain);
    const auto tokens = compute_token_features(domain, config);
    const auto idn = compute_idn_features(domain, table, config);

    FeatureVector v;
    v.name_length = basic.name_length;
    v.dot_count = basic.dot_count;
    v.hyphen_count = basic.hyphen_count;
    v.digit_count = basic.digit_count;
    v.digit_ratio = basic.digit_ratio;
    v.max_char_run = chars.max_char_run;
    v.max_char_freq = chars.max_char_freq;
    v.repeated_digit_flag = chars.repeated_digit_flag;
    v.suspicious_tld_flag = tokens.suspicious_tld_flag;
    v.unethical_token_flag = tokens.unethical_token_flag;
    v.whitelist_member_flag = tokens.whitelist_member_flag;
    v.brand_embedding_flag = tokens.brand_embedding_flag;
    v.confusable_count = idn.confusable_count;
    v.confusable_spoof_flag = idn.confusable_spoof_flag;
    if (enrichment) {
        v.domain_age_months = enrichment->age_months;
        v.scanner_rate = enrichment->scanner_rate;
    }
    return v;
}

} // namespace idnguard
