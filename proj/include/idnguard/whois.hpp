#pragma once

#include "idnguard/enrichment.hpp"

#include <chrono>
#include <cstdint>
#include <map>
#include <mutex>
#include <semaphore>
#include <string>

namespace idnguard {

struct LiveWhoisOptions {
    /// Fixed server for every query; empty selects one from the TLD.
    std::string server;
    std::uint16_t port = 43;
    std::chrono::milliseconds timeout{10000};
    /// Minimum spacing between two queries to the same server.
    std::chrono::milliseconds min_interval{1000};
};

/// Port-43 WHOIS client: sends "<domain>\r\n" and reads until the server
/// closes. Referrals are not followed. Connection failures and timeouts
/// come back as an absent response with a note ("whois timeout",
/// "whois connect failed: ...").
class LiveWhoisProvider final : public WhoisProvider {
public:
    static constexpr std::ptrdiff_t max_in_flight = 4;

    explicit LiveWhoisProvider(LiveWhoisOptions options = {});

    WhoisResponse fetch(const DomainName& domain) override;

    /// Server used for `tld` when no fixed server is configured.
    static std::string server_for_tld(const std::string& tld);

private:
    void wait_turn(const std::string& server);

    LiveWhoisOptions options_;
    std::mutex mutex_;
    std::map<std::string, std::chrono::steady_clock::time_point> next_allowed_;
    std::counting_semaphore<max_in_flight> in_flight_{max_in_flight};
};

} // namespace idnguard
