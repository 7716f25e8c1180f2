#include "agree/cache.hpp"

#include <chrono>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

namespace agree::cache {

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::Llm: return "LLM";
        case Kind::BasicSearch: return "BASIC_SEARCH";
        case Kind::AdvancedSearch: return "ADVANCED_SEARCH";
        case Kind::Scorer: return "SCORER";
        case Kind::Wikidata: return "WIKIDATA";
    }
    return "?";
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    EVP_DigestUpdate(ctx, data.data(), data.size());
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

ReplayCache::ReplayCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::string ReplayCache::key(Kind kind, const std::string& canonical_request) {
    return sha256_hex(std::string(kind_name(kind)) + '\n' + canonical_request);
}

std::optional<std::string> ReplayCache::get(Kind kind,
                                            const std::string& canonical_request) {
    auto path = dir_ / (key(kind, canonical_request) + ".json");
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ++misses_;
        return std::nullopt;
    }
    nlohmann::json entry;
    in >> entry;
    ++hits_;
    return entry.at("response").get<std::string>();
}

void ReplayCache::put(Kind kind, const std::string& canonical_request,
                      const std::string& response) {
    auto k = key(kind, canonical_request);
    nlohmann::json entry = {
        {"kind", kind_name(kind)},
        {"request", canonical_request},
        {"response", response},
        {"created_at",
         std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
             .count()},
    };
    std::lock_guard<std::mutex> lock(write_mutex_);
    auto tmp = dir_ / (k + ".tmp");
    auto final_path = dir_ / (k + ".json");
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cache: cannot write " + tmp.string());
        out << entry.dump(2);
    }
    std::filesystem::rename(tmp, final_path);
}

std::string CachedFetch::operator()(const std::string& canonical_request) {
    if (auto hit = cache_.get(kind_, canonical_request)) return *hit;
    ++network_calls_;
    auto response = transport_(canonical_request);
    cache_.put(kind_, canonical_request, response);
    return response;
}

}  // namespace agree::cache
