#include "idnguard/whois.hpp"

#include <doctest.h>

#include <atomic>
#include <thread>

#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

using namespace idnguard;
using namespace std::chrono_literals;

namespace {

// One-connection loopback server. `reply` empty means accept and stay silent.
class LocalServer {
public:
    explicit LocalServer(std::string reply, int connections = 1) : reply_(std::move(reply)) {
        fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
        int one = 1;
        ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
        addr.sin_port = 0;
        REQUIRE(::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0);
        REQUIRE(::listen(fd_, 8) == 0);
        socklen_t len = sizeof addr;
        ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
        port_ = ntohs(addr.sin_port);
        thread_ = std::jthread([this, connections] {
            for (int i = 0; i < connections; ++i) {
                const int c = ::accept(fd_, nullptr, nullptr);
                if (c < 0) {
                    return;
                }
                char buf[512];
                const auto n = ::recv(c, buf, sizeof buf, 0);
                if (n > 0) {
                    received_ += std::string(buf, static_cast<std::size_t>(n));
                }
                if (reply_.empty()) {
                    std::this_thread::sleep_for(600ms);
                } else {
                    ::send(c, reply_.data(), reply_.size(), 0);
                }
                ::close(c);
            }
        });
    }
    ~LocalServer() {
        ::shutdown(fd_, SHUT_RDWR);
        ::close(fd_);
    }
    std::uint16_t port() const { return port_; }
    const std::string& received() const { return received_; }

private:
    std::string reply_;
    int fd_ = -1;
    std::uint16_t port_ = 0;
    std::string received_;
    std::jthread thread_;
};

LiveWhoisOptions local(std::uint16_t port) {
    LiveWhoisOptions o;
    o.server = "127.0.0.1";
    o.port = port;
    o.timeout = 2000ms;
    o.min_interval = 0ms;
    return o;
}

} // namespace

TEST_CASE("server selection") {
    CHECK(LiveWhoisProvider::server_for_tld("com") == "whois.verisign-grs.com");
    CHECK(LiveWhoisProvider::server_for_tld("tk") == "tk.whois-servers.net");
}

TEST_CASE("live provider reads a full response") {
    const std::string reply = "Domain Name: EXAMPLE.COM\r\nCreation Date: 1995-08-14T04:00:00Z\r\n";
    LocalServer server(reply, 2);
    LiveWhoisProvider provider(local(server.port()));
    const auto r = provider.fetch(parse_domain("example.com"));
    REQUIRE(r.text);
    CHECK(*r.text == reply);
    const auto lookup = whois_lookup(parse_domain("example.com"), provider);
    CHECK(lookup.creation_date == Date{std::chrono::year{1995}, std::chrono::month{8}, std::chrono::day{14}});
}

TEST_CASE("live provider sends the ASCII domain") {
    LocalServer server("ok\n");
    LiveWhoisProvider provider(local(server.port()));
    CHECK(provider.fetch(parse_domain("ExAmple.com")).text == std::string("ok\n"));
    CHECK(server.received() == "example.com\r\n");
}

TEST_CASE("silent server times out") {
    LocalServer server("");
    auto opts = local(server.port());
    opts.timeout = 200ms;
    LiveWhoisProvider provider(opts);
    const auto start = std::chrono::steady_clock::now();
    const auto r = provider.fetch(parse_domain("example.com"));
    CHECK_FALSE(r.text);
    CHECK(r.note == "whois timeout");
    CHECK(std::chrono::steady_clock::now() - start < 2s);
}

TEST_CASE("refused connection is reported, not thrown") {
    // grab a free port, then close it
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
    socklen_t len = sizeof addr;
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
    const auto port = ntohs(addr.sin_port);
    ::close(fd);

    LiveWhoisProvider provider(local(port));
    const auto r = provider.fetch(parse_domain("example.com"));
    CHECK_FALSE(r.text);
    CHECK(r.note.rfind("whois connect failed", 0) == 0);
}

TEST_CASE("queries to one server are spaced by the minimum interval") {
    LocalServer server("x\n", 2);
    auto opts = local(server.port());
    opts.min_interval = 300ms;
    LiveWhoisProvider provider(opts);
    const auto start = std::chrono::steady_clock::now();
    CHECK(provider.fetch(parse_domain("a.com")).text);
    CHECK(provider.fetch(parse_domain("b.com")).text);
    CHECK(std::chrono::steady_clock::now() - start >= 300ms);
}
