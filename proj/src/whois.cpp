#include "idnguard/whois.hpp"

#include <cerrno>
#include <cstring>
#include <memory>
#include <thread>

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <unistd.h>

namespace idnguard {

namespace {

class Socket {
public:
    explicit Socket(int fd) : fd_(fd) {}
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;
    ~Socket() {
        if (fd_ >= 0) {
            ::close(fd_);
        }
    }
    int get() const { return fd_; }

private:
    int fd_;
};

enum class Wait { Ready, Timeout, Error };

Wait wait_for(int fd, short events, std::chrono::steady_clock::time_point deadline) {
    const auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
        return Wait::Timeout;
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    pollfd pfd{fd, events, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(ms) + 1);
    if (rc == 0) {
        return Wait::Timeout;
    }
    if (rc < 0) {
        return errno == EINTR ? wait_for(fd, events, deadline) : Wait::Error;
    }
    return Wait::Ready;
}

struct Semaphore {
    std::counting_semaphore<LiveWhoisProvider::max_in_flight>& sem;
    explicit Semaphore(std::counting_semaphore<LiveWhoisProvider::max_in_flight>& s) : sem(s) { sem.acquire(); }
    ~Semaphore() { sem.release(); }
};

} // namespace

LiveWhoisProvider::LiveWhoisProvider(LiveWhoisOptions options) : options_(std::move(options)) {}

std::string LiveWhoisProvider::server_for_tld(const std::string& tld) {
    static const std::map<std::string, std::string> known = {
        {"com", "whois.verisign-grs.com"}, {"net", "whois.verisign-grs.com"},
        {"org", "whois.pir.org"},          {"info", "whois.nic.info"},
        {"biz", "whois.nic.biz"},          {"io", "whois.nic.io"},
        {"uk", "whois.nic.uk"},            {"ru", "whois.tcinet.ru"},
    };
    if (const auto it = known.find(tld); it != known.end()) {
        return it->second;
    }
    return tld + ".whois-servers.net";
}

void LiveWhoisProvider::wait_turn(const std::string& server) {
    std::chrono::steady_clock::time_point slot;
    {
        std::lock_guard lock(mutex_);
        const auto now = std::chrono::steady_clock::now();
        auto& next = next_allowed_[server];
        slot = std::max(now, next);
        next = slot + options_.min_interval;
    }
    std::this_thread::sleep_until(slot);
}

WhoisResponse LiveWhoisProvider::fetch(const DomainName& domain) {
    const std::string server = options_.server.empty() ? server_for_tld(domain.tld) : options_.server;
    Semaphore guard(in_flight_);
    wait_turn(server);

    const auto deadline = std::chrono::steady_clock::now() + options_.timeout;

    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* found = nullptr;
    const std::string port = std::to_string(options_.port);
    if (const int rc = ::getaddrinfo(server.c_str(), port.c_str(), &hints, &found); rc != 0) {
        return {std::nullopt, std::string("whois connect failed: ") + ::gai_strerror(rc)};
    }
    std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> addrs(found, &::freeaddrinfo);

    std::string last_error = "no address";
    for (const addrinfo* ai = addrs.get(); ai; ai = ai->ai_next) {
        Socket sock(::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol));
        if (sock.get() < 0) {
            last_error = std::strerror(errno);
            continue;
        }
        ::fcntl(sock.get(), F_SETFL, ::fcntl(sock.get(), F_GETFL, 0) | O_NONBLOCK);

        if (::connect(sock.get(), ai->ai_addr, ai->ai_addrlen) < 0) {
            if (errno != EINPROGRESS) {
                last_error = std::strerror(errno);
                continue;
            }
            const Wait w = wait_for(sock.get(), POLLOUT, deadline);
            if (w == Wait::Timeout) {
                return {std::nullopt, "whois timeout"};
            }
            int err = 0;
            socklen_t len = sizeof err;
            ::getsockopt(sock.get(), SOL_SOCKET, SO_ERROR, &err, &len);
            if (w == Wait::Error || err != 0) {
                last_error = std::strerror(err ? err : errno);
                continue;
            }
        }

        const std::string query = domain.ascii() + "\r\n";
        std::size_t sent = 0;
        while (sent < query.size()) {
            const ssize_t n = ::send(sock.get(), query.data() + sent, query.size() - sent, MSG_NOSIGNAL);
            if (n > 0) {
                sent += static_cast<std::size_t>(n);
                continue;
            }
            if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
                if (wait_for(sock.get(), POLLOUT, deadline) == Wait::Timeout) {
                    return {std::nullopt, "whois timeout"};
                }
                continue;
            }
            return {std::nullopt, std::string("whois send failed: ") + std::strerror(errno)};
        }

        std::string response;
        char buf[4096];
        while (true) {
            const Wait w = wait_for(sock.get(), POLLIN, deadline);
            if (w == Wait::Timeout) {
                return {std::nullopt, "whois timeout"};
            }
            const ssize_t n = ::recv(sock.get(), buf, sizeof buf, 0);
            if (n == 0) {
                break;
            }
            if (n < 0) {
                if (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR) {
                    continue;
                }
                return {std::nullopt, std::string("whois receive failed: ") + std::strerror(errno)};
            }
            response.append(buf, static_cast<std::size_t>(n));
        }
        return {std::move(response), {}};
    }
    return {std::nullopt, "whois connect failed: " + last_error};
}

} // namespace idnguard
