#include "idnguard/enrichment.hpp"

#include "idnguard/csv.hpp"
#include "idnguard/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace idnguard {

namespace {

using namespace std::chrono;

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

bool read_number(std::string_view s, std::size_t pos, std::size_t width, int& out) {
    if (pos + width > s.size()) {
        return false;
    }
    int v = 0;
    for (std::size_t i = pos; i < pos + width; ++i) {
        if (s[i] < '0' || s[i] > '9') {
            return false;
        }
        v = v * 10 + (s[i] - '0');
    }
    out = v;
    return true;
}

std::optional<Date> make_date(int y, int m, int d) {
    const Date date{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!date.ok()) {
        return std::nullopt;
    }
    return date;
}

int month_from_abbrev(std::string_view s) {
    static constexpr std::array<std::string_view, 12> names = {"jan", "feb", "mar", "apr", "may", "jun",
                                                               "jul", "aug", "sep", "oct", "nov", "dec"};
    const std::string l = lowercase(s);
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (l == names[i]) {
            return static_cast<int>(i) + 1;
        }
    }
    return 0;
}

// Leading date of a WHOIS field value in one of the documented layouts.
std::optional<Date> parse_date_value(std::string_view v) {
    int y = 0, m = 0, d = 0;
    // YYYY-MM-DD, YYYY.MM.DD, YYYY/MM/DD
    if (read_number(v, 0, 4, y) && v.size() >= 10 && (v[4] == '-' || v[4] == '.' || v[4] == '/') &&
        v[7] == v[4] && read_number(v, 5, 2, m) && read_number(v, 8, 2, d)) {
        return make_date(y, m, d);
    }
    // DD-Mon-YYYY
    if (v.size() >= 11 && read_number(v, 0, 2, d) && v[2] == '-' && v[6] == '-' && read_number(v, 7, 4, y)) {
        if (const int mon = month_from_abbrev(v.substr(3, 3)); mon != 0) {
            return make_date(y, mon, d);
        }
    }
    // DD.MM.YYYY, DD/MM/YYYY
    if (v.size() >= 10 && read_number(v, 0, 2, d) && (v[2] == '.' || v[2] == '/') && v[5] == v[2] &&
        read_number(v, 3, 2, m) && read_number(v, 6, 4, y)) {
        return make_date(y, m, d);
    }
    return std::nullopt;
}

constexpr std::array<std::string_view, 7> creation_keys = {
    "creation date", "created", "created on", "registered on", "registration time",
    "domain registration date", "domain create date",
};

} // namespace

std::optional<Date> parse_iso_date(std::string_view text) {
    int y = 0, m = 0, d = 0;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !read_number(text, 0, 4, y) ||
        !read_number(text, 5, 2, m) || !read_number(text, 8, 2, d)) {
        return std::nullopt;
    }
    return make_date(y, m, d);
}

std::string format_date(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

int age_in_months(const Date& creation, const Date& reference) {
    if (sys_days{creation} > sys_days{reference}) {
        throw Error(Errc::FutureCreation,
                    "creation " + format_date(creation) + " is after reference " + format_date(reference));
    }
    int months = (static_cast<int>(reference.year()) - static_cast<int>(creation.year())) * 12 +
                 (static_cast<int>(static_cast<unsigned>(reference.month())) -
                  static_cast<int>(static_cast<unsigned>(creation.month())));
    if (reference.day() < creation.day()) {
        --months;
    }
    return months;
}

std::optional<Date> parse_whois_creation_date(std::string_view response) {
    std::size_t pos = 0;
    while (pos < response.size()) {
        auto eol = response.find('\n', pos);
        if (eol == std::string_view::npos) {
            eol = response.size();
        }
        const std::string_view line = response.substr(pos, eol - pos);
        pos = eol + 1;

        const auto colon = line.find(':');
        if (colon == std::string_view::npos) {
            continue;
        }
        const std::string key = lowercase(trim(line.substr(0, colon)));
        if (std::find(creation_keys.begin(), creation_keys.end(), key) == creation_keys.end()) {
            continue;
        }
        if (auto date = parse_date_value(trim(line.substr(colon + 1)))) {
            return date;
        }
    }
    return std::nullopt;
}

WhoisResponse FixtureWhoisProvider::fetch(const DomainName& domain) {
    const auto path = dir_ / (domain.ascii() + ".txt");
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return {std::nullopt, "no whois fixture"};
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return {buf.str(), {}};
}

WhoisLookupResult whois_lookup(const DomainName& domain, WhoisProvider& provider) {
    WhoisLookupResult result;
    const WhoisResponse response = provider.fetch(domain);
    if (!response.text) {
        result.notes.push_back(response.note.empty() ? "whois unavailable" : response.note);
        return result;
    }
    result.creation_date = parse_whois_creation_date(*response.text);
    if (!result.creation_date) {
        result.notes.push_back("whois response has no creation date");
    }
    return result;
}

std::optional<Verdict> parse_verdict(std::string_view text) {
    const std::string v = lowercase(trim(text));
    if (v == "malicious") {
        return Verdict::Malicious;
    }
    if (v == "clean") {
        return Verdict::Clean;
    }
    if (v == "unknown") {
        return Verdict::Unknown;
    }
    return std::nullopt;
}

std::string_view verdict_name(Verdict v) noexcept {
    switch (v) {
    case Verdict::Malicious: return "malicious";
    case Verdict::Clean: return "clean";
    case Verdict::Unknown: return "unknown";
    }
    return "unknown";
}

int aggregate_scanner_rate(std::span<const ScannerVerdict> verdicts) {
    if (verdicts.size() > max_scanners) {
        throw Error(Errc::TooManyVerdicts, std::to_string(verdicts.size()) + " verdicts");
    }
    std::set<std::string_view> seen;
    int malicious = 0;
    bool any_known = false;
    for (const auto& v : verdicts) {
        if (!seen.insert(v.scanner_id).second) {
            throw Error(Errc::DuplicateScanner, v.scanner_id);
        }
        if (v.verdict != Verdict::Unknown) {
            any_known = true;
        }
        if (v.verdict == Verdict::Malicious) {
            ++malicious;
        }
    }
    return any_known ? malicious : unknown_rate;
}

RatingsTable load_ratings_csv(const std::filesystem::path& path) {
    const auto rows = csv::read_file(path);
    if (rows.empty()) {
        throw Error(Errc::MissingColumn, path.string() + ": empty file");
    }
    const auto& header = rows.front().fields;
    const auto c_domain = csv::find_column(header, "domain");
    const auto c_scanner = csv::find_column(header, "scanner_id");
    const auto c_verdict = csv::find_column(header, "verdict");
    if (c_domain == csv::npos || c_scanner == csv::npos || c_verdict == csv::npos) {
        throw Error(Errc::MissingColumn, path.string() + ": expected domain,scanner_id,verdict");
    }

    RatingsTable table;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const auto where = path.string() + ":" + std::to_string(row.line);
        const std::size_t needed = std::max({c_domain, c_scanner, c_verdict}) + 1;
        if (row.fields.size() < needed) {
            throw Error(Errc::MalformedRow, where + ": too few fields");
        }
        const auto verdict = parse_verdict(row.fields[c_verdict]);
        if (!verdict) {
            throw Error(Errc::MalformedRow, where + ": verdict '" + row.fields[c_verdict] + "'");
        }
        std::string domain;
        try {
            domain = parse_domain(row.fields[c_domain]).ascii();
        } catch (const Error& e) {
            throw Error(Errc::MalformedRow, where + ": " + e.what());
        }
        auto& list = table[domain];
        list.push_back({std::string(trim(row.fields[c_scanner])), *verdict});
        try {
            aggregate_scanner_rate(list);
        } catch (const Error& e) {
            throw Error(e.code(), where + ": " + domain + " " + e.what());
        }
    }
    return table;
}

EnrichmentResult enrich(const DomainName& domain, const EnrichmentSources& sources) {
    EnrichmentResult result;
    result.domain = domain.ascii();

    if (sources.whois) {
        auto lookup = whois_lookup(domain, *sources.whois);
        result.provider_notes = std::move(lookup.notes);
        if (lookup.creation_date) {
            result.creation_date = lookup.creation_date;
            try {
                result.age_months = age_in_months(*lookup.creation_date, sources.reference_date);
            } catch (const Error&) {
                result.age_months = 0;
                result.provider_notes.push_back("creation date after reference date; age set to 0");
            }
        }
    }

    if (sources.ratings) {
        if (const auto it = sources.ratings->find(result.domain); it != sources.ratings->end()) {
            result.scanner_rate = aggregate_scanner_rate(it->second);
        } else {
            result.provider_notes.push_back("no scanner ratings");
        }
    }
    return result;
}

} // namespace idnguard
