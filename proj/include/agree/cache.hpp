#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>

// Content-addressed store of external-call responses. Keys are a strong
// digest of (kind, canonicalized request), so identical requests replay
// byte-identically across runs and hosts.
namespace agree::cache {

enum class Kind { Llm, BasicSearch, AdvancedSearch, Scorer, Wikidata };
const char* kind_name(Kind k);

std::string sha256_hex(std::string_view data);

class ReplayCache {
public:
    explicit ReplayCache(std::filesystem::path dir);

    static std::string key(Kind kind, const std::string& canonical_request);

    std::optional<std::string> get(Kind kind, const std::string& canonical_request);
    // atomic write-then-rename per entry
    void put(Kind kind, const std::string& canonical_request,
             const std::string& response);

    std::size_t hits() const { return hits_.load(); }
    std::size_t misses() const { return misses_.load(); }
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    std::atomic<std::size_t> hits_{0};
    std::atomic<std::size_t> misses_{0};
    std::mutex write_mutex_;
};

// Routes a transport through the cache: hit -> stored response, miss ->
// transport call, recorded. `network_calls` counts actual transport calls so
// replay closure is assertable.
class CachedFetch {
public:
    using Transport = std::function<std::string(const std::string& request)>;

    CachedFetch(ReplayCache& cache, Kind kind, Transport transport)
        : cache_(cache), kind_(kind), transport_(std::move(transport)) {}

    std::string operator()(const std::string& canonical_request);

    std::size_t network_calls() const { return network_calls_.load(); }

private:
    ReplayCache& cache_;
    Kind kind_;
    Transport transport_;
    std::atomic<std::size_t> network_calls_{0};
};

}  // namespace agree::cache
