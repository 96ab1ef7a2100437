#include "idnguard/synthetic.hpp"

#include "idnguard/forest.hpp"
#include "idnguard/utf8.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace idnguard::synthetic {

namespace {

const std::vector<std::string> lure_words = {
    "secure", "login", "verify", "account", "update", "signin", "confirm", "wallet", "billing",
    "support", "service", "online", "auth", "recovery", "alert", "unlock", "payment", "invoice",
};

const std::vector<std::string> benign_words = {
    "river", "maple", "stone", "garden", "north", "cloud", "pixel", "harbor", "forest", "amber",
    "city", "news", "press", "cook", "travel", "music", "books", "studio", "craft", "lab",
    "daily", "green", "ocean", "field", "light", "metro", "atlas", "prime", "urban", "civic",
};

const std::vector<std::string> subdomains = {"www", "mail", "cdn", "portal", "m", "web", "app"};
const std::vector<std::string> risky_tlds = {"tk", "xyz", "top", "pw", "cc", "ws", "info", "biz"};
const std::vector<std::string> common_tlds = {"com", "org", "net", "edu", "de", "io"};
const std::vector<std::string> brands = {"paypal", "apple", "citibank", "google", "amazon", "microsoft",
                                         "netflix", "facebook", "chase", "wellsfargo"};

// Latin letter -> look-alike that the extended confusable table knows.
const std::vector<std::pair<char, char32_t>> lookalikes = {
    {'a', 0x0430}, {'e', 0x0435}, {'o', 0x043E}, {'p', 0x0440}, {'c', 0x0441},
    {'x', 0x0445}, {'i', 0x0456}, {'l', 0x04CF}, {'k', 0x03BA}, {'w', 0x03C9},
};

template <typename T>
const T& pick(const std::vector<T>& v, Rng& rng) {
    return v[rng.uniform_index(v.size())];
}

int uniform_int(Rng& rng, int lo, int hi) {
    return lo + static_cast<int>(rng.uniform_index(static_cast<std::size_t>(hi - lo + 1)));
}

double uniform01(Rng& rng) {
    return static_cast<double>(rng.next() >> 11) * 0x1.0p-53;
}

std::string spoof_brand(const std::string& brand, Rng& rng) {
    std::u32string out(brand.begin(), brand.end());
    std::vector<std::size_t> positions;
    for (std::size_t i = 0; i < brand.size(); ++i) {
        for (const auto& [latin, cp] : lookalikes) {
            if (brand[i] == latin) {
                positions.push_back(i);
                break;
            }
        }
    }
    const std::size_t swaps = positions.size() > 1 ? 1 + rng.uniform_index(2) : positions.size();
    for (std::size_t s = 0; s < swaps; ++s) {
        const std::size_t pos = positions[rng.uniform_index(positions.size())];
        for (const auto& [latin, cp] : lookalikes) {
            if (brand[pos] == latin) {
                out[pos] = cp;
                break;
            }
        }
    }
    return utf8::encode(out);
}

std::string malicious_name(Rng& rng, double confusable_rate) {
    if (uniform01(rng) < confusable_rate) {
        std::string name = spoof_brand(pick(brands, rng), rng);
        if (rng.uniform_index(2)) {
            name += "-" + pick(lure_words, rng);
        }
        return name + "." + (rng.uniform_index(2) ? std::string("com") : pick(risky_tlds, rng));
    }
    std::string name;
    const int tokens = uniform_int(rng, 2, 4);
    for (int t = 0; t < tokens; ++t) {
        if (t) {
            name += '-';
        }
        name += (t == 0 && rng.uniform_index(3) == 0) ? pick(brands, rng) : pick(lure_words, rng);
    }
    name += std::to_string(uniform_int(rng, 10, 9999));
    std::string host;
    const int subs = uniform_int(rng, 0, 3);
    for (int s = 0; s < subs; ++s) {
        host += pick(subdomains, rng) + ".";
    }
    return host + name + "." + pick(risky_tlds, rng);
}

std::string benign_name(Rng& rng) {
    std::string name = pick(benign_words, rng);
    if (rng.uniform_index(2)) {
        name += pick(benign_words, rng);
    }
    return name + "." + pick(common_tlds, rng);
}

Date months_before(const Date& reference, int months) {
    using namespace std::chrono;
    const year_month ym = year_month{reference.year(), reference.month()} - std::chrono::months{months};
    return Date{ym.year(), ym.month(), std::min(reference.day(), day{28})};
}

} // namespace

std::vector<Record> generate(const Options& options, std::uint64_t seed) {
    Rng rng(seed);
    std::set<std::string> used;
    std::vector<Record> records;
    records.reserve(options.malicious + options.benign);

    auto unique_name = [&](auto make) {
        for (;;) {
            std::string name = make();
            if (used.insert(name).second) {
                return name;
            }
        }
    };

    for (std::size_t i = 0; i < options.malicious; ++i) {
        Record r;
        r.domain = unique_name([&] { return malicious_name(rng, options.confusable_rate); });
        r.label = 1;
        r.age_months = uniform_int(rng, 0, 6);
        r.scanner_rate = uniform_int(rng, 3, 5);
        records.push_back(std::move(r));
    }
    for (std::size_t i = 0; i < options.benign; ++i) {
        Record r;
        r.domain = unique_name([&] { return benign_name(rng); });
        r.label = 0;
        r.age_months = uniform_int(rng, 60, 300);
        r.scanner_rate = 0;
        records.push_back(std::move(r));
    }

    const auto flips = static_cast<std::size_t>(std::llround(options.label_noise * static_cast<double>(records.size())));
    for (std::size_t f = 0; f < flips;) {
        auto& r = records[rng.uniform_index(records.size())];
        if (!r.flipped) {
            r.flipped = true;
            r.label = 1 - r.label;
            ++f;
        }
    }
    return records;
}

const std::vector<std::string>& brand_domains() {
    static const std::vector<std::string> domains = [] {
        std::vector<std::string> out;
        for (const auto& b : brands) {
            out.push_back(b + ".com");
        }
        return out;
    }();
    return domains;
}

FeatureConfig default_feature_config() {
    FeatureConfig config;
    config.tld_risk_set = default_tld_risk_set();
    config.unethical_tokens = default_unethical_tokens();
    for (const auto& d : brand_domains()) {
        config.whitelist.add(parse_domain(d));
    }
    return config;
}

void write_fixtures(const std::filesystem::path& dir, const std::vector<Record>& records, const Date& reference) {
    std::filesystem::create_directories(dir / "whois");
    std::ofstream blocklist(dir / "blocklist.txt", std::ios::binary);
    std::ofstream whitelist(dir / "whitelist.csv", std::ios::binary);
    std::ofstream ratings(dir / "ratings.csv", std::ios::binary);
    blocklist << "# synthetic blocklist\n";
    whitelist << "rank,domain\n";
    ratings << "domain,scanner_id,verdict\n";

    std::size_t rank = 0;
    for (const auto& r : records) {
        const DomainName d = parse_domain(r.domain);
        const std::string ascii = d.ascii();
        if (r.label == 1) {
            blocklist << "0.0.0.0 " << ascii << "\n";
        } else {
            whitelist << ++rank << "," << ascii << "\n";
        }
        for (int s = 0; s < 5; ++s) {
            ratings << ascii << ",scanner" << (s + 1) << "," << (s < r.scanner_rate ? "malicious" : "clean") << "\n";
        }
        std::ofstream whois(dir / "whois" / (ascii + ".txt"), std::ios::binary);
        whois << "Domain Name: " << ascii << "\n"
              << "Registrar: Example Registrar, Inc.\n"
              << "Creation Date: " << format_date(months_before(reference, r.age_months)) << "T00:00:00Z\n";
    }
}

} // namespace idnguard::synthetic
