#include "idnguard/enrichment.hpp"
#include "idnguard/error.hpp"
#include "temp_dir.hpp"

#include <doctest.h>

#include <map>

using namespace idnguard;
using namespace std::chrono;

namespace {

Date ymd(int y, unsigned m, unsigned d) {
    return Date{year{y}, month{m}, day{d}};
}

class MapProvider final : public WhoisProvider {
public:
    std::map<std::string, std::string> texts;
    WhoisResponse fetch(const DomainName& domain) override {
        if (const auto it = texts.find(domain.ascii()); it != texts.end()) {
            return {it->second, {}};
        }
        return {std::nullopt, "whois timeout"};
    }
};

} // namespace

TEST_CASE("iso dates") {
    CHECK(parse_iso_date("2020-02-29") == ymd(2020, 2, 29));
    CHECK_FALSE(parse_iso_date("2019-02-29"));
    CHECK_FALSE(parse_iso_date("2020-1-01"));
    CHECK_FALSE(parse_iso_date("2020-01-01x"));
    CHECK(format_date(ymd(2007, 3, 9)) == "2007-03-09");
}

TEST_CASE("age in months") {
    CHECK(age_in_months(ymd(2019, 1, 15), ymd(2020, 1, 15)) == 12);
    CHECK(age_in_months(ymd(2019, 1, 15), ymd(2020, 1, 14)) == 11);
    CHECK(age_in_months(ymd(2020, 1, 31), ymd(2020, 2, 29)) == 0);
    CHECK(age_in_months(ymd(2020, 1, 1), ymd(2020, 1, 1)) == 0);
    CHECK(age_in_months(ymd(1995, 8, 14), ymd(2020, 1, 1)) == 292);
    CHECK_THROWS_AS(age_in_months(ymd(2020, 1, 2), ymd(2020, 1, 1)), Error);
    try {
        age_in_months(ymd(2021, 1, 1), ymd(2020, 1, 1));
    } catch (const Error& e) {
        CHECK(e.code() == Errc::FutureCreation);
    }
}

TEST_CASE("WHOIS creation date formats") {
    CHECK(parse_whois_creation_date("Domain Name: X\r\nCreation Date: 1997-09-15T04:00:00Z\r\n") ==
          ymd(1997, 9, 15));
    CHECK(parse_whois_creation_date("created: 2001.02.03\n") == ymd(2001, 2, 3));
    CHECK(parse_whois_creation_date("Registered on: 05-Mar-2010\n") == ymd(2010, 3, 5));
    CHECK(parse_whois_creation_date("Created On: 2012/11/30 10:00\n") == ymd(2012, 11, 30));
    CHECK(parse_whois_creation_date("Registration Time: 2015-06-01 09:00:00\n") == ymd(2015, 6, 1));
    CHECK(parse_whois_creation_date("Domain Registration Date: 24.12.2008\n") == ymd(2008, 12, 24));
    CHECK(parse_whois_creation_date("domain create date: 07/07/2017\n") == ymd(2017, 7, 7));
    CHECK_FALSE(parse_whois_creation_date("Updated Date: 2019-01-01\nExpiry Date: 2030-01-01\n"));
    CHECK_FALSE(parse_whois_creation_date("Creation Date: soon\n"));
    CHECK_FALSE(parse_whois_creation_date(""));
    // first parseable creation field wins
    CHECK(parse_whois_creation_date("Created: never\nCreation Date: 2000-01-02\n") == ymd(2000, 1, 2));
}

TEST_CASE("fixture provider") {
    testing::TempDir dir;
    dir.write("example.com.txt", "Creation Date: 2010-05-06T00:00:00Z\n");
    dir.write("nodate.com.txt", "Registrar: nobody\n");
    FixtureWhoisProvider provider(dir.path());

    auto r = whois_lookup(parse_domain("Example.COM"), provider);
    CHECK(r.creation_date == ymd(2010, 5, 6));
    CHECK(r.notes.empty());

    r = whois_lookup(parse_domain("missing.com"), provider);
    CHECK_FALSE(r.creation_date);
    REQUIRE(r.notes.size() == 1);
    CHECK(r.notes[0] == "no whois fixture");

    r = whois_lookup(parse_domain("nodate.com"), provider);
    CHECK_FALSE(r.creation_date);
    CHECK(r.notes.size() == 1);
}

TEST_CASE("verdicts and aggregation") {
    CHECK(parse_verdict(" Malicious ") == Verdict::Malicious);
    CHECK(parse_verdict("clean") == Verdict::Clean);
    CHECK(parse_verdict("UNKNOWN") == Verdict::Unknown);
    CHECK_FALSE(parse_verdict("bad"));
    CHECK(verdict_name(Verdict::Clean) == "clean");

    std::vector<ScannerVerdict> v;
    CHECK(aggregate_scanner_rate(v) == -1);
    v = {{"a", Verdict::Unknown}, {"b", Verdict::Unknown}};
    CHECK(aggregate_scanner_rate(v) == -1);
    v = {{"a", Verdict::Clean}, {"b", Verdict::Unknown}};
    CHECK(aggregate_scanner_rate(v) == 0);
    v = {{"a", Verdict::Malicious}, {"b", Verdict::Malicious}, {"c", Verdict::Clean},
         {"d", Verdict::Malicious}, {"e", Verdict::Unknown}};
    CHECK(aggregate_scanner_rate(v) == 3);
    v.push_back({"f", Verdict::Clean});
    CHECK_THROWS_AS(aggregate_scanner_rate(v), Error);
    v = {{"a", Verdict::Clean}, {"a", Verdict::Malicious}};
    CHECK_THROWS_AS(aggregate_scanner_rate(v), Error);
}

TEST_CASE("ratings CSV") {
    testing::TempDir dir;
    const auto good = dir.write("r.csv", "domain,scanner_id,verdict\n"
                                         "Evil.TK,s1,malicious\n"
                                         "evil.tk,s2,malicious\n"
                                         "evil.tk,s3,clean\n"
                                         "good.com,s1,clean\n");
    const auto table = load_ratings_csv(good);
    REQUIRE(table.size() == 2);
    CHECK(aggregate_scanner_rate(table.at("evil.tk")) == 2);
    CHECK(aggregate_scanner_rate(table.at("good.com")) == 0);

    auto code_of = [](const std::filesystem::path& p) {
        try {
            load_ratings_csv(p);
        } catch (const Error& e) {
            return e.code();
        }
        return Errc::EmptyInput;
    };
    CHECK(code_of(dir.write("a.csv", "domain,verdict\nx.com,clean\n")) == Errc::MissingColumn);
    CHECK(code_of(dir.write("b.csv", "domain,scanner_id,verdict\nx.com,s1,maybe\n")) == Errc::MalformedRow);
    CHECK(code_of(dir.write("c.csv", "domain,scanner_id,verdict\nx.com,s1,clean\nx.com,s1,clean\n")) ==
          Errc::DuplicateScanner);
    CHECK(code_of(dir.write("d.csv", "domain,scanner_id,verdict\n"
                                     "x.com,1,clean\nx.com,2,clean\nx.com,3,clean\n"
                                     "x.com,4,clean\nx.com,5,clean\nx.com,6,clean\n")) == Errc::TooManyVerdicts);
    CHECK(code_of(dir / "absent.csv") == Errc::FileNotFound);
}

TEST_CASE("enrich combines sources and degrades to unknown") {
    MapProvider whois;
    whois.texts["old.com"] = "Creation Date: 2000-01-01T00:00:00Z\n";
    whois.texts["future.com"] = "Creation Date: 2030-01-01T00:00:00Z\n";
    RatingsTable ratings;
    ratings["old.com"] = {{"s1", Verdict::Clean}, {"s2", Verdict::Malicious}};

    EnrichmentSources src{&whois, &ratings, ymd(2020, 1, 1)};
    auto r = enrich(parse_domain("old.com"), src);
    CHECK(r.age_months == 240);
    CHECK(r.scanner_rate == 1);
    CHECK(r.provider_notes.empty());

    r = enrich(parse_domain("unreachable.com"), src);
    CHECK(r.age_months == -1);
    CHECK(r.scanner_rate == -1);
    CHECK(r.provider_notes.size() == 2);

    r = enrich(parse_domain("future.com"), src);
    CHECK(r.age_months == 0);
    CHECK_FALSE(r.provider_notes.empty());

    r = enrich(parse_domain("old.com"), EnrichmentSources{nullptr, nullptr, ymd(2020, 1, 1)});
    CHECK(r.age_months == -1);
    CHECK(r.scanner_rate == -1);
}
