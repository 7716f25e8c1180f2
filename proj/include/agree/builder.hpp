#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agree/kg.hpp"

// Emerging-entities benchmark construction: temporal window, category
// whitelist, cardinality filter, benchmark emission.
namespace agree::builder {

struct BuilderConfig {
    std::string window_start;  // ISO date, inclusive
    std::string window_end;    // ISO date, exclusive
    std::vector<std::string> categories;  // class ids / names
    std::size_t max_tail_cardinality = 10;
    std::string endpoint;
    std::size_t page_size = 50;
    bool subclass_expansion = false;  // one-level expansion via the client

    void validate() const;  // throws on bad window or empty categories
};

// The 20-category default whitelist; meant to be overridden in config.
const std::vector<std::string>& default_categories();

struct RawEntityBundle {
    kg::EntityId id;
    std::string label;
    std::string description;
    std::string inception;  // ISO date; may come from a publication-date fallback
    bool used_publication_fallback = false;
    std::vector<std::string> categories;
    std::vector<kg::Triple> triples;  // this entity as head
    std::vector<std::string> aliases;
};

class WikidataClient {
public:
    virtual ~WikidataClient() = default;
    // Candidate ids for the selection query; the builder sorts and filters.
    virtual std::vector<kg::EntityId> list_candidates(const BuilderConfig& cfg) = 0;
    virtual RawEntityBundle fetch_entity(const kg::EntityId& id) = 0;
    // class -> direct subclasses, for optional one-level expansion
    virtual std::map<std::string, std::vector<std::string>> subclass_map() {
        return {};
    }
};

// Fixture-backed client reading a JSON document:
// {"entities": [{"id","label","description","inception","categories",
//                "aliases","triples":[[h,r,t],...]}],
//  "subclasses": {"class": ["sub", ...]}}
class FixtureWikidataClient : public WikidataClient {
public:
    explicit FixtureWikidataClient(const std::filesystem::path& json_path);
    explicit FixtureWikidataClient(const std::string& json_text, int);

    std::vector<kg::EntityId> list_candidates(const BuilderConfig& cfg) override;
    RawEntityBundle fetch_entity(const kg::EntityId& id) override;
    std::map<std::string, std::vector<std::string>> subclass_map() override;

private:
    std::map<kg::EntityId, RawEntityBundle> entities_;
    std::map<std::string, std::vector<std::string>> subclasses_;
};

// Persists fetched bundles so an interrupted build resumes where it stopped.
class ProgressStore {
public:
    explicit ProgressStore(std::filesystem::path file);
    std::optional<RawEntityBundle> lookup(const kg::EntityId& id) const;
    void record(const RawEntityBundle& bundle);

private:
    std::filesystem::path file_;
    std::map<kg::EntityId, RawEntityBundle> bundles_;
    void save() const;
};

// Every entity with inception in [window_start, window_end) and at least one
// whitelisted category, fetched in ascending id order. Endpoint failures
// propagate after the progress store has captured completed fetches.
std::vector<RawEntityBundle> fetch_emerging_entities(const BuilderConfig& cfg,
                                                     WikidataClient& client,
                                                     ProgressStore* progress = nullptr);

// Drop every (head, relation) group whose distinct-tail count exceeds
// max_card; strict inequality, so a group of exactly max_card survives.
std::vector<kg::Triple> apply_cardinality_filter(
    const std::vector<RawEntityBundle>& bundles, std::size_t max_card);

struct Manifest {
    std::size_t triple_count = 0;
    std::size_t relation_count = 0;
    std::size_t entity_count = 0;
    std::string window_start, window_end;
    std::vector<std::string> categories;
    std::string endpoint;
    std::string build_timestamp;
};

// Writes triples.tsv, catalog.tsv, manifest.json into out_dir. Byte
// reproducible apart from the manifest timestamp.
Manifest emit_benchmark(const std::vector<kg::Triple>& triples,
                        const std::vector<RawEntityBundle>& bundles,
                        const std::filesystem::path& out_dir,
                        const BuilderConfig& cfg);

}  // namespace agree::builder
