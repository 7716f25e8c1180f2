#include "agree/builder.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace agree::builder {

using nlohmann::json;

void BuilderConfig::validate() const {
    if (window_start.empty() || window_end.empty() || window_start >= window_end)
        throw std::invalid_argument("builder: window_start must precede window_end");
    if (categories.empty())
        throw std::invalid_argument("builder: categories must be non-empty");
}

const std::vector<std::string>& default_categories() {
    static const std::vector<std::string> cats = {
        "artist",
        "music album",
        "TV show",
        "film",
        "television series",
        "large language model",
        "hotel",
        "nonprofit organization",
        "video game",
        "song",
        "book",
        "company",
        "software",
        "sports team",
        "political party",
        "building",
        "festival",
        "award",
        "podcast",
        "smartphone model",
    };
    return cats;
}

namespace {

json bundle_to_json(const RawEntityBundle& b) {
    json triples = json::array();
    for (const auto& t : b.triples)
        triples.push_back({t.head, t.relation, t.tail});
    return {{"id", b.id},
            {"label", b.label},
            {"description", b.description},
            {"inception", b.inception},
            {"used_publication_fallback", b.used_publication_fallback},
            {"categories", b.categories},
            {"aliases", b.aliases},
            {"triples", triples}};
}

RawEntityBundle bundle_from_json(const json& e) {
    RawEntityBundle b;
    b.id = e.at("id").get<std::string>();
    b.label = e.value("label", "");
    b.description = e.value("description", "");
    b.inception = e.value("inception", "");
    b.used_publication_fallback = e.value("used_publication_fallback", false);
    if (e.contains("categories"))
        b.categories = e["categories"].get<std::vector<std::string>>();
    if (e.contains("aliases"))
        b.aliases = e["aliases"].get<std::vector<std::string>>();
    if (e.contains("triples"))
        for (const auto& t : e["triples"])
            b.triples.push_back({t.at(0).get<std::string>(),
                                 t.at(1).get<std::string>(),
                                 t.at(2).get<std::string>()});
    return b;
}

}  // namespace

FixtureWikidataClient::FixtureWikidataClient(const std::filesystem::path& json_path) {
    std::ifstream in(json_path);
    if (!in)
        throw std::runtime_error("fixture endpoint: cannot open " +
                                 json_path.string());
    json doc;
    in >> doc;
    for (const auto& e : doc.at("entities")) {
        auto b = bundle_from_json(e);
        entities_.emplace(b.id, std::move(b));
    }
    if (doc.contains("subclasses"))
        subclasses_ = doc["subclasses"]
                          .get<std::map<std::string, std::vector<std::string>>>();
}

FixtureWikidataClient::FixtureWikidataClient(const std::string& json_text, int) {
    json doc = json::parse(json_text);
    for (const auto& e : doc.at("entities")) {
        auto b = bundle_from_json(e);
        entities_.emplace(b.id, std::move(b));
    }
    if (doc.contains("subclasses"))
        subclasses_ = doc["subclasses"]
                          .get<std::map<std::string, std::vector<std::string>>>();
}

std::vector<kg::EntityId> FixtureWikidataClient::list_candidates(const BuilderConfig&) {
    std::vector<kg::EntityId> ids;
    ids.reserve(entities_.size());
    for (const auto& [id, _] : entities_) ids.push_back(id);
    return ids;
}

RawEntityBundle FixtureWikidataClient::fetch_entity(const kg::EntityId& id) {
    auto it = entities_.find(id);
    if (it == entities_.end())
        throw std::runtime_error("fixture endpoint: unknown entity " + id);
    return it->second;
}

std::map<std::string, std::vector<std::string>>
FixtureWikidataClient::subclass_map() {
    return subclasses_;
}

ProgressStore::ProgressStore(std::filesystem::path file) : file_(std::move(file)) {
    std::ifstream in(file_);
    if (!in) return;
    json doc;
    in >> doc;
    for (const auto& e : doc.at("bundles")) {
        auto b = bundle_from_json(e);
        bundles_.emplace(b.id, std::move(b));
    }
}

std::optional<RawEntityBundle> ProgressStore::lookup(const kg::EntityId& id) const {
    auto it = bundles_.find(id);
    if (it == bundles_.end()) return std::nullopt;
    return it->second;
}

void ProgressStore::record(const RawEntityBundle& bundle) {
    bundles_[bundle.id] = bundle;
    save();
}

void ProgressStore::save() const {
    json arr = json::array();
    for (const auto& [_, b] : bundles_) arr.push_back(bundle_to_json(b));
    json doc = {{"bundles", arr}};
    auto tmp = file_;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        out << doc.dump(2);
    }
    std::filesystem::rename(tmp, file_);
}

std::vector<RawEntityBundle> fetch_emerging_entities(const BuilderConfig& cfg,
                                                     WikidataClient& client,
                                                     ProgressStore* progress) {
    cfg.validate();
    auto ids = client.list_candidates(cfg);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    std::set<std::string> wanted(cfg.categories.begin(), cfg.categories.end());
    if (cfg.subclass_expansion) {
        auto subs = client.subclass_map();
        for (const auto& c : cfg.categories) {
            auto it = subs.find(c);
            if (it != subs.end())
                wanted.insert(it->second.begin(), it->second.end());
        }
    }

    std::vector<RawEntityBundle> out;
    for (const auto& id : ids) {
        RawEntityBundle bundle;
        if (progress) {
            if (auto cached = progress->lookup(id)) {
                bundle = *cached;
            } else {
                bundle = client.fetch_entity(id);
                progress->record(bundle);
            }
        } else {
            bundle = client.fetch_entity(id);
        }
        // half-open window [start, end)
        if (bundle.inception.empty() || bundle.inception < cfg.window_start ||
            bundle.inception >= cfg.window_end)
            continue;
        bool category_hit = std::any_of(
            bundle.categories.begin(), bundle.categories.end(),
            [&](const std::string& c) { return wanted.count(c) > 0; });
        if (!category_hit) continue;
        out.push_back(std::move(bundle));
    }
    return out;
}

std::vector<kg::Triple> apply_cardinality_filter(
    const std::vector<RawEntityBundle>& bundles, std::size_t max_card) {
    std::vector<kg::Triple> out;
    for (const auto& b : bundles) {
        // group triples by (head, relation) preserving order
        std::map<std::pair<std::string, std::string>, std::set<std::string>> distinct;
        for (const auto& t : b.triples)
            distinct[{t.head, t.relation}].insert(t.tail);
        for (const auto& t : b.triples) {
            if (distinct.at({t.head, t.relation}).size() > max_card) continue;
            out.push_back(t);
        }
    }
    return out;
}

Manifest emit_benchmark(const std::vector<kg::Triple>& triples,
                        const std::vector<RawEntityBundle>& bundles,
                        const std::filesystem::path& out_dir,
                        const BuilderConfig& cfg) {
    std::filesystem::create_directories(out_dir);

    std::map<kg::EntityId, const RawEntityBundle*> by_id;
    for (const auto& b : bundles) by_id[b.id] = &b;

    // re-check the window at emission
    std::vector<kg::Triple> kept;
    for (const auto& t : triples) {
        auto it = by_id.find(t.head);
        if (it == by_id.end()) continue;
        const auto& inc = it->second->inception;
        if (inc < cfg.window_start || inc >= cfg.window_end) continue;
        kept.push_back(t);
    }

    std::set<std::string> relations;
    std::set<kg::EntityId> heads;
    {
        std::ofstream out(out_dir / "triples.tsv", std::ios::binary);
        for (const auto& t : kept) {
            out << t.head << '\t' << t.relation << '\t' << t.tail << '\n';
            relations.insert(t.relation);
            heads.insert(t.head);
        }
    }
    {
        std::ofstream out(out_dir / "catalog.tsv", std::ios::binary);
        for (const auto& b : bundles) {
            if (!heads.count(b.id)) continue;
            std::string aliases;
            for (const auto& a : b.aliases) {
                if (a == b.label) continue;
                if (!aliases.empty()) aliases += '|';
                aliases += a;
            }
            out << b.id << '\t' << b.label << '\t' << aliases << '\t'
                << b.description << '\n';
        }
    }

    Manifest m;
    m.triple_count = kept.size();
    m.relation_count = relations.size();
    m.entity_count = heads.size();
    m.window_start = cfg.window_start;
    m.window_end = cfg.window_end;
    m.categories = cfg.categories;
    m.endpoint = cfg.endpoint;
    {
        auto now = std::chrono::system_clock::now();
        std::time_t tt = std::chrono::system_clock::to_time_t(now);
        std::tm tm{};
        gmtime_r(&tt, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        m.build_timestamp = buf;
    }
    json doc = {{"triple_count", m.triple_count},
                {"relation_count", m.relation_count},
                {"entity_count", m.entity_count},
                {"window", {{"start", m.window_start}, {"end", m.window_end}}},
                {"categories", m.categories},
                {"endpoint", m.endpoint},
                {"build_timestamp", m.build_timestamp}};
    std::ofstream out(out_dir / "manifest.json", std::ios::binary);
    out << doc.dump(2) << '\n';
    return m;
}

}  // namespace agree::builder
