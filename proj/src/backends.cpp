#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/ip.h>
#include <netinet/ip_icmp.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <optional>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <thread>

#include "segmeter/errors.hpp"
#include "segmeter/prober.hpp"

namespace segmeter {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// ---------------------------------------------------------------- simulated

class SimulatedBackend final : public ProbeBackend {
public:
    SimulatedBackend(std::shared_ptr<const Graph> graph, const NodeInventory& inventory, std::vector<NodeId> nodes)
        : graph_(std::move(graph)), nodes_(std::move(nodes)) {
        if (!graph_) throw ConfigError("simulated backend needs a graph");
        if (nodes_.size() != inventory.size()) throw ConfigError("simulated backend: id map size mismatch");
        for (std::size_t i = 0; i < inventory.size(); ++i) {
            if (nodes_[i] >= graph_->node_count())
                throw ConfigError("inventory id '" + inventory[i].id + "' maps outside the graph");
            by_id_.emplace(inventory[i].id, nodes_[i]);
        }
    }

    std::string id() const override { return "simulated"; }
    std::string vantage() const override { return "simulated-policy-oracle"; }
    bool concurrent_safe() const override { return true; }

    ProbeResult probe(const InventoryEntry& src, const InventoryEntry& dst, const ProbeSpec& spec) override {
        const auto a = by_id_.find(src.id);
        const auto b = by_id_.find(dst.id);
        if (a == by_id_.end() || b == by_id_.end()) throw ProbeError("simulated backend: unmapped inventory id");
        ProbeResult r;
        r.spec = spec;
        r.verdict = graph_->has_edge(a->second, b->second) ? Verdict::success : Verdict::timeout;
        return r;
    }

private:
    std::shared_ptr<const Graph> graph_;
    std::vector<NodeId> nodes_;
    std::unordered_map<std::string, NodeId> by_id_;
};

// --------------------------------------------------------------------- exec

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    return out + "'";
}

class ExecBackend final : public ProbeBackend {
public:
    ExecBackend(std::string tmpl, bool concurrent) : template_(std::move(tmpl)), concurrent_(concurrent) {
        // `{name}` tokens must be known placeholders; `${VAR}` and shell
        // groups are left alone.
        for (std::size_t i = template_.find('{'); i != std::string::npos; i = template_.find('{', i + 1)) {
            const auto close = template_.find('}', i);
            if (close == std::string::npos || (i > 0 && template_[i - 1] == '$')) continue;
            const std::string name = template_.substr(i + 1, close - i - 1);
            const bool ident = !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
                return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
            });
            if (ident && name != "src" && name != "dst" && name != "src_id" && name != "dst_id")
                throw ConfigError("exec template has unknown placeholder {" + name + "}");
        }
    }

    std::string id() const override { return "exec"; }
    std::string vantage() const override { return "exec-template"; }
    bool concurrent_safe() const override { return concurrent_; }

    std::string render(const InventoryEntry& src, const InventoryEntry& dst) const {
        std::string out;
        for (std::size_t i = 0; i < template_.size();) {
            auto try_sub = [&](std::string_view key, const std::string& value) {
                if (template_.compare(i, key.size(), key) != 0) return false;
                out += shell_quote(value);
                i += key.size();
                return true;
            };
            if (try_sub("{src_id}", src.id) || try_sub("{dst_id}", dst.id) || try_sub("{src}", src.address) ||
                try_sub("{dst}", dst.address))
                continue;
            out += template_[i++];
        }
        return out;
    }

    ProbeResult probe(const InventoryEntry& src, const InventoryEntry& dst, const ProbeSpec& spec) override {
        const std::string command = render(src, dst);
        ProbeResult r;
        r.spec = spec;
        const auto start = Clock::now();
        const pid_t pid = ::fork();
        if (pid < 0) throw ProbeError(std::string("exec backend: fork failed: ") + std::strerror(errno));
        if (pid == 0) {
            ::setpgid(0, 0);
            const int devnull = ::open("/dev/null", O_RDWR);
            if (devnull >= 0) {
                ::dup2(devnull, STDIN_FILENO);
                ::dup2(devnull, STDOUT_FILENO);
                ::dup2(devnull, STDERR_FILENO);
            }
            ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
            ::_exit(127);
        }
        ::setpgid(pid, pid);
        const auto deadline = start + spec.timeout;
        int status = 0;
        for (;;) {
            const pid_t done = ::waitpid(pid, &status, WNOHANG);
            if (done == pid) break;
            if (done < 0 && errno != EINTR) throw ProbeError(std::string("exec backend: waitpid: ") + std::strerror(errno));
            if (Clock::now() >= deadline) {
                ::kill(-pid, SIGKILL);
                ::kill(pid, SIGKILL);
                ::waitpid(pid, &status, 0);
                r.verdict = Verdict::timeout;
                r.latency_ms = elapsed_ms(start);
                r.detail = "killed after timeout";
                return r;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(2));
        }
        r.latency_ms = elapsed_ms(start);
        if (WIFEXITED(status) && WEXITSTATUS(status) == 0) {
            r.verdict = Verdict::success;
        } else {
            r.verdict = Verdict::refused;
            r.detail = WIFEXITED(status) ? "exit " + std::to_string(WEXITSTATUS(status)) : "terminated by signal";
        }
        return r;
    }

private:
    std::string template_;
    bool concurrent_;
};

// ------------------------------------------------------------------ sockets

class Fd {
public:
    explicit Fd(int fd = -1) : fd_(fd) {}
    Fd(const Fd&) = delete;
    Fd& operator=(const Fd&) = delete;
    ~Fd() {
        if (fd_ >= 0) ::close(fd_);
    }
    int get() const { return fd_; }
    explicit operator bool() const { return fd_ >= 0; }

private:
    int fd_;
};

struct Resolved {
    sockaddr_storage addr{};
    socklen_t len = 0;
    int family = AF_INET;
};

std::optional<Resolved> resolve(const std::string& host, std::uint16_t port, int socktype, std::string& error) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = socktype;
    addrinfo* res = nullptr;
    const std::string service = std::to_string(port);
    if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res); rc != 0) {
        error = std::string("resolve failed: ") + ::gai_strerror(rc);
        return std::nullopt;
    }
    Resolved r;
    std::memcpy(&r.addr, res->ai_addr, res->ai_addrlen);
    r.len = static_cast<socklen_t>(res->ai_addrlen);
    r.family = res->ai_family;
    ::freeaddrinfo(res);
    return r;
}

int remaining_ms(Clock::time_point deadline) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    return static_cast<int>(std::max<long long>(0, left));
}

Verdict classify_errno(int err, std::string& detail) {
    detail = std::strerror(err);
    switch (err) {
        case ECONNREFUSED: return Verdict::refused;
        case ETIMEDOUT:
        case EHOSTUNREACH:
        case ENETUNREACH:
        case EHOSTDOWN: return Verdict::timeout;
        default: return Verdict::error;
    }
}

// Minimal DNS query (". IN NS") so that port-53 targets answer.
std::vector<unsigned char> udp_payload(std::uint16_t port) {
    if (port == 53) return {0x5e, 0x67, 0x01, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x02, 0x00, 0x01};
    return {0x00};
}

std::uint16_t icmp_checksum(const unsigned char* data, std::size_t len) {
    std::uint32_t sum = 0;
    for (std::size_t i = 0; i + 1 < len; i += 2) sum += static_cast<std::uint32_t>(data[i] << 8 | data[i + 1]);
    if (len % 2) sum += static_cast<std::uint32_t>(data[len - 1] << 8);
    while (sum >> 16) sum = (sum & 0xffff) + (sum >> 16);
    return static_cast<std::uint16_t>(~sum);
}

class SocketBackend final : public ProbeBackend {
public:
    explicit SocketBackend(bool deterministic) : deterministic_(deterministic) {}

    std::string id() const override { return "socket"; }
    std::string vantage() const override {
        if (deterministic_) return "central";
        std::array<char, 256> host{};
        ::gethostname(host.data(), host.size() - 1);
        return std::string("central:") + host.data();
    }
    bool concurrent_safe() const override { return true; }

    ProbeResult probe(const InventoryEntry&, const InventoryEntry& dst, const ProbeSpec& spec) override {
        switch (spec.kind) {
            case ProbeKind::tcp: return tcp(dst.address, spec);
            case ProbeKind::udp: return udp(dst.address, spec);
            case ProbeKind::icmp: return icmp(dst.address, spec);
            case ProbeKind::exec: break;
        }
        return {spec, Verdict::error, 0.0, "socket backend cannot run exec probes"};
    }

private:
    static ProbeResult tcp(const std::string& host, const ProbeSpec& spec) {
        ProbeResult r{spec, Verdict::error, 0.0, {}};
        const auto start = Clock::now();
        auto addr = resolve(host, spec.port, SOCK_STREAM, r.detail);
        if (!addr) return r;
        Fd fd(::socket(addr->family, SOCK_STREAM | SOCK_NONBLOCK | SOCK_CLOEXEC, 0));
        if (!fd) throw ProbeError(std::string("socket(): ") + std::strerror(errno));
        int rc = ::connect(fd.get(), reinterpret_cast<const sockaddr*>(&addr->addr), addr->len);
        if (rc != 0 && errno != EINPROGRESS) {
            r.verdict = classify_errno(errno, r.detail);
            r.latency_ms = elapsed_ms(start);
            return r;
        }
        if (rc != 0) {
            pollfd p{fd.get(), POLLOUT, 0};
            rc = ::poll(&p, 1, static_cast<int>(spec.timeout.count()));
            if (rc == 0) {
                r.verdict = Verdict::timeout;
                r.latency_ms = elapsed_ms(start);
                return r;
            }
            int err = 0;
            socklen_t len = sizeof err;
            ::getsockopt(fd.get(), SOL_SOCKET, SO_ERROR, &err, &len);
            if (err != 0) {
                r.verdict = classify_errno(err, r.detail);
                r.latency_ms = elapsed_ms(start);
                return r;
            }
        }
        r.verdict = Verdict::success;
        r.latency_ms = elapsed_ms(start);
        return r;
    }

    static ProbeResult udp(const std::string& host, const ProbeSpec& spec) {
        ProbeResult r{spec, Verdict::error, 0.0, {}};
        const auto start = Clock::now();
        const auto deadline = start + spec.timeout;
        auto addr = resolve(host, spec.port, SOCK_DGRAM, r.detail);
        if (!addr) return r;
        Fd fd(::socket(addr->family, SOCK_DGRAM | SOCK_NONBLOCK | SOCK_CLOEXEC, 0));
        if (!fd) throw ProbeError(std::string("socket(): ") + std::strerror(errno));
        if (::connect(fd.get(), reinterpret_cast<const sockaddr*>(&addr->addr), addr->len) != 0) {
            r.verdict = classify_errno(errno, r.detail);
            return r;
        }
        const auto payload = udp_payload(spec.port);
        if (::send(fd.get(), payload.data(), payload.size(), 0) < 0) {
            r.verdict = classify_errno(errno, r.detail);
            r.latency_ms = elapsed_ms(start);
            return r;
        }
        std::array<unsigned char, 1500> buf{};
        for (;;) {
            pollfd p{fd.get(), POLLIN, 0};
            const int rc = ::poll(&p, 1, remaining_ms(deadline));
            if (rc == 0) {
                r.verdict = Verdict::timeout;
                r.detail = "no response";
                break;
            }
            const ssize_t got = ::recv(fd.get(), buf.data(), buf.size(), 0);
            if (got >= 0) {
                r.verdict = Verdict::success;
                break;
            }
            if (errno == EAGAIN || errno == EINTR) continue;
            r.verdict = classify_errno(errno, r.detail);
            break;
        }
        r.latency_ms = elapsed_ms(start);
        return r;
    }

    static ProbeResult icmp(const std::string& host, const ProbeSpec& spec) {
        ProbeResult r{spec, Verdict::error, 0.0, {}};
        const auto start = Clock::now();
        const auto deadline = start + spec.timeout;
        addrinfo hints{};
        hints.ai_family = AF_INET;
        addrinfo* res = nullptr;
        if (const int rc = ::getaddrinfo(host.c_str(), nullptr, &hints, &res); rc != 0) {
            r.detail = std::string("resolve failed (IPv4 only for ICMP): ") + ::gai_strerror(rc);
            return r;
        }
        sockaddr_in target{};
        std::memcpy(&target, res->ai_addr, sizeof target);
        ::freeaddrinfo(res);

        // Unprivileged ping sockets first, raw sockets as a fallback.
        bool raw = false;
        int sock = ::socket(AF_INET, SOCK_DGRAM | SOCK_NONBLOCK | SOCK_CLOEXEC, IPPROTO_ICMP);
        if (sock < 0) {
            sock = ::socket(AF_INET, SOCK_RAW | SOCK_NONBLOCK | SOCK_CLOEXEC, IPPROTO_ICMP);
            raw = true;
        }
        if (sock < 0) {
            r.detail = std::string("ICMP socket not permitted: ") + std::strerror(errno);
            return r;
        }
        Fd fd(sock);
        static std::atomic<std::uint16_t> sequence{1};
        const std::uint16_t seq = sequence.fetch_add(1);
        const std::uint16_t ident = static_cast<std::uint16_t>(::getpid() & 0xffff);
        std::array<unsigned char, 16> packet{};
        packet[0] = ICMP_ECHO;
        packet[4] = static_cast<unsigned char>(ident >> 8);
        packet[5] = static_cast<unsigned char>(ident & 0xff);
        packet[6] = static_cast<unsigned char>(seq >> 8);
        packet[7] = static_cast<unsigned char>(seq & 0xff);
        const std::uint16_t sum = icmp_checksum(packet.data(), packet.size());
        packet[2] = static_cast<unsigned char>(sum >> 8);
        packet[3] = static_cast<unsigned char>(sum & 0xff);
        if (::sendto(fd.get(), packet.data(), packet.size(), 0, reinterpret_cast<const sockaddr*>(&target),
                     sizeof target) < 0) {
            r.verdict = classify_errno(errno, r.detail);
            r.latency_ms = elapsed_ms(start);
            return r;
        }
        std::array<unsigned char, 1500> buf{};
        for (;;) {
            pollfd p{fd.get(), POLLIN, 0};
            if (::poll(&p, 1, remaining_ms(deadline)) == 0) {
                r.verdict = Verdict::timeout;
                break;
            }
            sockaddr_in from{};
            socklen_t len = sizeof from;
            const ssize_t got = ::recvfrom(fd.get(), buf.data(), buf.size(), 0, reinterpret_cast<sockaddr*>(&from), &len);
            if (got < 0) {
                if (errno == EAGAIN || errno == EINTR) continue;
                r.verdict = classify_errno(errno, r.detail);
                break;
            }
            std::size_t offset = 0;
            if (raw) {
                if (got < 20) continue;
                offset = static_cast<std::size_t>(buf[0] & 0x0f) * 4;
            }
            if (static_cast<std::size_t>(got) < offset + 8) continue;
            if (from.sin_addr.s_addr != target.sin_addr.s_addr) continue;
            const unsigned char type = buf[offset];
            const std::uint16_t rseq = static_cast<std::uint16_t>(buf[offset + 6] << 8 | buf[offset + 7]);
            if (type == ICMP_ECHOREPLY && rseq == seq) {
                r.verdict = Verdict::success;
                break;
            }
        }
        r.latency_ms = elapsed_ms(start);
        return r;
    }

    bool deterministic_;
};

}  // namespace

std::unique_ptr<ProbeBackend> simulated_backend(std::shared_ptr<const Graph> graph, const NodeInventory& inventory,
                                                std::vector<NodeId> node_of_entry) {
    return std::make_unique<SimulatedBackend>(std::move(graph), inventory, std::move(node_of_entry));
}

std::unique_ptr<ProbeBackend> simulated_backend(std::shared_ptr<const Graph> graph, const NodeInventory& inventory,
                                                const std::unordered_map<std::string, NodeId>& node_of_id) {
    std::vector<NodeId> nodes;
    nodes.reserve(inventory.size());
    for (const auto& e : inventory.entries()) {
        const auto it = node_of_id.find(e.id);
        if (it == node_of_id.end()) throw ConfigError("inventory id '" + e.id + "' is not a node of the policy graph");
        nodes.push_back(it->second);
    }
    return simulated_backend(std::move(graph), inventory, std::move(nodes));
}

std::unique_ptr<ProbeBackend> exec_backend(std::string command_template, bool concurrent) {
    return std::make_unique<ExecBackend>(std::move(command_template), concurrent);
}

std::unique_ptr<ProbeBackend> socket_backend(bool deterministic) {
    return std::make_unique<SocketBackend>(deterministic);
}

}  // namespace segmeter
