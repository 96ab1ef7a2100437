#pragma once

#include "idnguard/domain.hpp"

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace idnguard {

using Date = std::chrono::year_month_day;

/// Parses "YYYY-MM-DD". Returns nullopt for anything else or an invalid date.
std::optional<Date> parse_iso_date(std::string_view text);
std::string format_date(const Date& date);

inline constexpr int unknown_age = -1;
inline constexpr int unknown_rate = -1;
inline constexpr std::size_t max_scanners = 5;

struct EnrichmentResult {
    std::string domain;
    std::optional<Date> creation_date;
    int age_months = unknown_age;
    int scanner_rate = unknown_rate;
    std::vector<std::string> provider_notes;
};

// --- domain age -----------------------------------------------------------

/// Whole months from `creation` to `reference`: 12 * year delta + month
/// delta, less one when the reference day-of-month is earlier.
/// Throws Error{FutureCreation} when creation > reference.
int age_in_months(const Date& creation, const Date& reference);

/// Scans a free-text WHOIS response for a creation field. Recognized keys
/// (case-insensitive, before the first ':'): "Creation Date", "Created",
/// "Created On", "Registered on", "Registration Time", "Domain Registration
/// Date", "Domain Create Date". Recognized values start with YYYY-MM-DD,
/// YYYY.MM.DD, YYYY/MM/DD, DD-Mon-YYYY, DD.MM.YYYY or DD/MM/YYYY.
std::optional<Date> parse_whois_creation_date(std::string_view response);

struct WhoisResponse {
    std::optional<std::string> text;
    std::string note; // why text is absent
};

/// Source of raw WHOIS text. Implementations must tolerate concurrent calls.
class WhoisProvider {
public:
    virtual ~WhoisProvider() = default;
    virtual WhoisResponse fetch(const DomainName& domain) = 0;
};

/// Reads `<dir>/<domain>.txt`. No network access.
class FixtureWhoisProvider final : public WhoisProvider {
public:
    explicit FixtureWhoisProvider(std::filesystem::path dir) : dir_(std::move(dir)) {}
    WhoisResponse fetch(const DomainName& domain) override;

private:
    std::filesystem::path dir_;
};

struct WhoisLookupResult {
    std::optional<Date> creation_date;
    std::vector<std::string> notes;
};

WhoisLookupResult whois_lookup(const DomainName& domain, WhoisProvider& provider);

// --- scanner reputation ---------------------------------------------------

enum class Verdict { Malicious, Clean, Unknown };

std::optional<Verdict> parse_verdict(std::string_view text);
std::string_view verdict_name(Verdict v) noexcept;

struct ScannerVerdict {
    std::string scanner_id;
    Verdict verdict = Verdict::Unknown;
};

/// Number of malicious verdicts, or -1 when there are none that are not
/// Unknown. Throws DuplicateScanner or TooManyVerdicts (> 5).
int aggregate_scanner_rate(std::span<const ScannerVerdict> verdicts);

/// Ratings keyed by the normalized ASCII domain.
using RatingsTable = std::map<std::string, std::vector<ScannerVerdict>>;

/// Loads "domain,scanner_id,verdict" rows. Throws FileNotFound,
/// MissingColumn, MalformedRow (bad verdict or unparseable domain),
/// DuplicateScanner or TooManyVerdicts.
RatingsTable load_ratings_csv(const std::filesystem::path& path);

// --- combined -------------------------------------------------------------

struct EnrichmentSources {
    WhoisProvider* whois = nullptr;       // absent: age stays unknown
    const RatingsTable* ratings = nullptr; // absent: rate stays unknown
    Date reference_date{};
};

EnrichmentResult enrich(const DomainName& domain, const EnrichmentSources& sources);

} // namespace idnguard
