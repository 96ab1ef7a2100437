#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oracle {

namespace {

std::uint64_t adapt(std::uint64_t delta, std::uint64_t numpoints, bool firsttime) {
    delta = firsttime ? delta / 700 : delta / 2;
    delta += delta / numpoints;
    std::uint64_t k = 0;
    while (delta > 455) { // ((36 - 1) * 26) / 2
        delta /= 35;
        k += 36;
    }
    return k + (36 * delta) / (delta + 38);
}

char encode_digit(std::uint64_t d) {
    const char* alphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
    return alphabet[d];
}

double gini(double a, double b) {
    const double n = a + b;
    return 1.0 - ((a / n) * (a / n) + (b / n) * (b / n));
}

} // namespace

std::string punycode_encode(const std::u32string& input) {
    std::uint64_t n = 128;
    std::uint64_t delta = 0;
    std::uint64_t bias = 72;
    std::string output;
    for (char32_t c : input) {
        if (c < 128) {
            output += static_cast<char>(c);
        }
    }
    const std::uint64_t b = output.size();
    std::uint64_t h = b;
    if (b > 0) {
        output += '-';
    }
    while (h < input.size()) {
        std::uint64_t m = UINT64_MAX;
        for (char32_t c : input) {
            if (c >= n) {
                m = std::min<std::uint64_t>(m, c);
            }
        }
        delta += (m - n) * (h + 1);
        n = m;
        for (char32_t c : input) {
            if (c < n) {
                ++delta;
            } else if (c == n) {
                std::uint64_t q = delta;
                for (std::uint64_t k = 36;; k += 36) {
                    std::uint64_t t = k <= bias ? 1 : (k >= bias + 26 ? 26 : k - bias);
                    if (q < t) {
                        break;
                    }
                    output += encode_digit(t + (q - t) % (36 - t));
                    q = (q - t) / (36 - t);
                }
                output += encode_digit(q);
                bias = adapt(delta, h + 1, h == b);
                delta = 0;
                ++h;
            }
        }
        ++delta;
        ++n;
    }
    return output;
}

std::optional<idnguard::Split> best_split(const idnguard::TrainingSet& data, const std::vector<std::size_t>& rows,
                                          const std::vector<std::size_t>& features, std::size_t min_leaf) {
    double parent_pos = 0;
    for (auto r : rows) {
        parent_pos += data.labels[r];
    }
    const double total = static_cast<double>(rows.size());
    if (rows.size() < 2 || parent_pos == 0 || parent_pos == total) {
        return std::nullopt;
    }
    const double parent = gini(total - parent_pos, parent_pos);

    std::vector<std::size_t> sorted_features = features;
    std::sort(sorted_features.begin(), sorted_features.end());
    sorted_features.erase(std::unique(sorted_features.begin(), sorted_features.end()), sorted_features.end());

    std::optional<idnguard::Split> best;
    for (auto f : sorted_features) {
        std::set<double> distinct;
        for (auto r : rows) {
            distinct.insert(data.at(r, f));
        }
        std::vector<double> values(distinct.begin(), distinct.end());
        for (std::size_t i = 0; i + 1 < values.size(); ++i) {
            double t = std::midpoint(values[i], values[i + 1]);
            if (!(t < values[i + 1])) {
                t = values[i];
            }
            double lp = 0, ln = 0, rp = 0, rn = 0;
            for (auto r : rows) {
                const bool left = data.at(r, f) <= t;
                const bool pos = data.labels[r] == 1;
                (left ? (pos ? lp : ln) : (pos ? rp : rn)) += 1;
            }
            if (lp + ln < static_cast<double>(min_leaf) || rp + rn < static_cast<double>(min_leaf)) {
                continue;
            }
            const double gain = parent - ((lp + ln) / total) * gini(ln, lp) - ((rp + rn) / total) * gini(rn, rp);
            if (gain > 1e-12 && (!best || gain > best->gain + 1e-12)) {
                best = idnguard::Split{f, t, gain};
            }
        }
    }
    return best;
}

double auc(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels) {
    double wins = 0;
    double pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!labels[i]) {
            continue;
        }
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j]) {
                continue;
            }
            pairs += 1;
            if (scores[i] > scores[j]) {
                wins += 1;
            } else if (scores[i] == scores[j]) {
                wins += 0.5;
            }
        }
    }
    return wins / pairs;
}

Recount recount(const std::string& s, const std::set<std::string>& risky_tlds, const std::set<std::string>& tokens,
                const std::set<std::string>& whitelist_domains, std::size_t min_brand_length) {
    Recount r;
    r.name_length = static_cast<int>(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (c == '.') {
            r.dot_count++;
            continue;
        }
        if (c == '-') {
            r.hyphen_count++;
        }
        if (c >= '0' && c <= '9') {
            r.digit_count++;
        }
        // run starting at i, stopping at a different character or a dot
        int run = 0;
        for (std::size_t j = i; j < s.size() && s[j] == c; ++j) {
            ++run;
        }
        r.max_char_run = std::max(r.max_char_run, run);
        int freq = 0;
        for (char d : s) {
            freq += d == c;
        }
        r.max_char_freq = std::max(r.max_char_freq, freq);
    }
    for (char d = '0'; d <= '9'; ++d) {
        if (std::count(s.begin(), s.end(), d) >= 2) {
            r.repeated_digit_flag = 1;
        }
    }
    const auto last_dot = s.rfind('.');
    const std::string tld = last_dot == std::string::npos ? s : s.substr(last_dot + 1);
    r.suspicious_tld_flag = risky_tlds.count(tld) ? 1 : 0;
    for (const auto& t : tokens) {
        for (std::size_t i = 0; i + t.size() <= s.size(); ++i) {
            if (s.compare(i, t.size(), t) == 0) {
                r.unethical_token_flag = 1;
            }
        }
    }
    r.whitelist_member_flag = whitelist_domains.count(s) ? 1 : 0;
    if (!r.whitelist_member_flag) {
        for (const auto& w : whitelist_domains) {
            const auto dot = w.rfind('.');
            if (dot == std::string::npos) {
                continue;
            }
            const auto prev = w.rfind('.', dot - 1);
            const std::string brand = w.substr(prev == std::string::npos ? 0 : prev + 1,
                                               dot - (prev == std::string::npos ? 0 : prev + 1));
            if (brand.size() < min_brand_length || brand.size() >= s.size()) {
                continue;
            }
            for (std::size_t i = 0; i + brand.size() <= s.size(); ++i) {
                if (s.compare(i, brand.size(), brand) == 0) {
                    r.brand_embedding_flag = 1;
                }
            }
        }
    }
    return r;
}

std::vector<Hit> confusable_scan(const std::vector<std::u32string>& labels, const std::map<char32_t, char>& table) {
    std::vector<Hit> hits;
    for (std::size_t l = 0; l < labels.size(); ++l) {
        for (std::size_t c = 0; c < labels[l].size(); ++c) {
            if (table.count(labels[l][c])) {
                hits.push_back({l, c, labels[l][c]});
            }
        }
    }
    return hits;
}

} // namespace oracle
