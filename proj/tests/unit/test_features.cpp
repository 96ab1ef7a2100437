#include "idnguard/error.hpp"
#include "idnguard/features.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace idnguard;

namespace {

ConfusableTable extended() {
    return load_confusable_file(std::string(IDNGUARD_CONFIG_DIR) + "/confusables-extended.json");
}

FeatureConfig config_with(std::initializer_list<const char*> whitelist) {
    FeatureConfig c;
    c.tld_risk_set = {"tk", "biz", "xyz"};
    c.unethical_tokens = {"casino", "porn"};
    for (const char* w : whitelist) {
        c.whitelist.add(parse_domain(w));
    }
    return c;
}

} // namespace

TEST_CASE("feature order is fixed") {
    CHECK(FeatureVector::arity == feature_names.size());
    CHECK(feature_order().front() == "name_length");
    CHECK(feature_order().back() == "scanner_rate");
    CHECK(feature_descriptions.size() == feature_names.size());
}

TEST_CASE("basic counts") {
    auto b = compute_basic(parse_domain("example.com"));
    CHECK(b.name_length == 11);
    CHECK(b.dot_count == 1);
    CHECK(b.hyphen_count == 0);
    CHECK(b.digit_count == 0);

    b = compute_basic(parse_domain("a-b-c1.com"));
    CHECK(b.hyphen_count == 2);
    CHECK(b.digit_count == 1);
    CHECK(b.digit_ratio == doctest::Approx(0.1));

    b = compute_basic(parse_domain("pay.pal.secure.login.example"));
    CHECK(b.dot_count == 4);
    CHECK(b.dot_count > dot_alert_level);
}

TEST_CASE("character indicators") {
    auto c = compute_char_indicators(parse_domain("aaab.com"));
    CHECK(c.max_char_run == 3);
    CHECK(c.max_char_freq == 3);

    c = compute_char_indicators(parse_domain("a1b1c1.com"));
    CHECK(c.repeated_digit_flag == 1);

    c = compute_char_indicators(parse_domain("abcdef.org"));
    CHECK(c.max_char_run == 1);
    CHECK(c.repeated_digit_flag == 0);

    // dots are not counted and break runs
    c = compute_char_indicators(parse_domain("a.a.a.b"));
    CHECK(c.max_char_run == 1);
    CHECK(c.max_char_freq == 3);
}

TEST_CASE("token features") {
    const auto cfg = config_with({"paypal.com"});
    auto t = compute_token_features(parse_domain("paypal.com"), cfg);
    CHECK(t.whitelist_member_flag == 1);
    CHECK(t.brand_embedding_flag == 0);

    t = compute_token_features(parse_domain("paypal-secure-login.tk"), cfg);
    CHECK(t.brand_embedding_flag == 1);
    CHECK(t.suspicious_tld_flag == 1);
    CHECK(t.whitelist_member_flag == 0);

    t = compute_token_features(parse_domain("best-casino-777.com"), cfg);
    CHECK(t.unethical_token_flag == 1);
    CHECK(t.suspicious_tld_flag == 0);

    t = compute_token_features(parse_domain("PayPal.COM."), cfg);
    CHECK(t.whitelist_member_flag == 1);
}

TEST_CASE("brand labels shorter than the minimum do not embed") {
    const auto cfg = config_with({"hp.com"});
    CHECK(compute_token_features(parse_domain("hp-support.tk"), cfg).brand_embedding_flag == 0);
}

TEST_CASE("config validation") {
    FeatureConfig c;
    c.min_brand_length = 3;
    CHECK_THROWS_AS(c.validate(), Error);
    c.min_brand_length = 4;
    c.unethical_tokens = {"Casino"};
    CHECK_THROWS_AS(c.validate(), Error);
    c.unethical_tokens = {""};
    CHECK_THROWS_AS(c.validate(), Error);
    c.unethical_tokens = {"casino"};
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("IDN features") {
    const auto t = extended();
    auto f = compute_idn_features(parse_domain("example.com"), t, config_with({}));
    CHECK(f.confusable_count == 0);
    CHECK(f.confusable_spoof_flag == 0);

    f = compute_idn_features(parse_domain("сitibank.com"), t, config_with({"citibank.com"}));
    CHECK(f.confusable_count == 1);
    CHECK(f.confusable_spoof_flag == 1);

    f = compute_idn_features(parse_domain("сitibank.com"), t, config_with({}));
    CHECK(f.confusable_count == 1);
    CHECK(f.confusable_spoof_flag == 0);

    // the genuine domain is never its own spoof
    f = compute_idn_features(parse_domain("citibank.com"), t, config_with({"citibank.com"}));
    CHECK(f.confusable_spoof_flag == 0);
}

TEST_CASE("assembled vector") {
    const auto t = extended();
    const auto cfg = config_with({"google.com"});

    const auto bare = assemble_feature_vector(parse_domain("test-7x.biz"), std::nullopt, cfg, t);
    CHECK(bare.domain_age_months == -1);
    CHECK(bare.scanner_rate == -1);
    CHECK(bare.name_length == 11);

    EnrichmentResult e;
    e.age_months = 2;
    e.scanner_rate = 4;
    const auto v = assemble_feature_vector(parse_domain("test-7x.biz"), e, cfg, t);
    CHECK(v.suspicious_tld_flag == 1);
    CHECK(v.hyphen_count == 1);
    CHECK(v.digit_count == 1);
    CHECK(v.domain_age_months == 2);
    CHECK(v.scanner_rate == 4);

    e.age_months = 240;
    e.scanner_rate = 0;
    const auto g = assemble_feature_vector(parse_domain("google.com"), e, cfg, t);
    CHECK(g.whitelist_member_flag == 1);
    CHECK(g.scanner_rate == 0);
    CHECK(g.to_array()[14] == 240);
}

TEST_CASE("property: counts match a brute-force recount on random ASCII domains") {
    std::mt19937 gen(5);
    const std::string alphabet = "abcdefghijklmnopqrstuvwxyz0123456789-";
    const std::vector<std::string> tlds = {"com", "tk", "biz", "org", "xyz", "net"};
    FeatureConfig cfg = config_with({"paypal.com", "google.com", "casa.org", "hp.com"});
    const auto t = default_confusable_table();
    for (int trial = 0; trial < 300; ++trial) {
        std::string name;
        const int labels = 1 + static_cast<int>(gen() % 3);
        for (int l = 0; l < labels; ++l) {
            const int len = 1 + static_cast<int>(gen() % 14);
            std::string label;
            for (int i = 0; i < len; ++i) {
                label += gen() % 3 == 0 ? alphabet[26 + gen() % 10] : alphabet[gen() % alphabet.size()];
            }
            if (label.front() == '-') {
                label.front() = 'q';
            }
            if (label.back() == '-') {
                label.back() = 'z';
            }
            name += label;
            if (gen() % 6 == 0) {
                name += "paypal";
            }
            name += '.';
        }
        name += tlds[gen() % tlds.size()];
        const auto d = parse_domain(name);
        const auto v = assemble_feature_vector(d, std::nullopt, cfg, t);
        const auto r = oracle::recount(name, cfg.tld_risk_set, cfg.unethical_tokens, cfg.whitelist.domains,
                                       cfg.min_brand_length);
        CHECK(v.name_length == r.name_length);
        CHECK(v.dot_count == r.dot_count);
        CHECK(v.hyphen_count == r.hyphen_count);
        CHECK(v.digit_count == r.digit_count);
        CHECK(v.max_char_run == r.max_char_run);
        CHECK(v.max_char_freq == r.max_char_freq);
        CHECK(v.repeated_digit_flag == r.repeated_digit_flag);
        CHECK(v.suspicious_tld_flag == r.suspicious_tld_flag);
        CHECK(v.unethical_token_flag == r.unethical_token_flag);
        CHECK(v.whitelist_member_flag == r.whitelist_member_flag);
        CHECK(v.brand_embedding_flag == r.brand_embedding_flag);
        CHECK(v.dot_count + 1 == static_cast<int>(d.ascii_labels.size()));
        CHECK(v.max_char_run <= v.max_char_freq);
        CHECK(v.max_char_freq <= v.name_length);
        CHECK(v.digit_ratio >= 0.0);
        CHECK(v.digit_ratio <= 1.0);
    }
}

TEST_CASE("property: whitelist insertion order does not change vectors") {
    const std::vector<std::string> list = {"paypal.com", "google.com", "citibank.com", "apple.com", "amazon.com"};
    std::vector<std::string> shuffled = list;
    std::mt19937 gen(9);
    const auto t = extended();
    for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(shuffled.begin(), shuffled.end(), gen);
        FeatureConfig a;
        FeatureConfig b;
        for (const auto& w : list) {
            a.whitelist.add(parse_domain(w));
        }
        for (const auto& w : shuffled) {
            b.whitelist.add(parse_domain(w));
        }
        for (const char* probe : {"paypal-login.tk", "xn--80ak6aa92e.com", "сitibank.com", "google.com"}) {
            const auto d = parse_domain(probe);
            CHECK(assemble_feature_vector(d, std::nullopt, a, t) == assemble_feature_vector(d, std::nullopt, b, t));
        }
    }
}
