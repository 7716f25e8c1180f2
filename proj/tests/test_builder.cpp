#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "agree/builder.hpp"

using namespace agree;
using nlohmann::json;

namespace {

json entity(const std::string& id, const std::string& inception,
            const std::vector<std::string>& categories,
            const std::vector<std::vector<std::string>>& triples = {}) {
    json e = {{"id", id},
              {"label", id + " label"},
              {"description", ""},
              {"inception", inception},
              {"categories", categories},
              {"aliases", json::array()},
              {"triples", triples}};
    return e;
}

builder::BuilderConfig config(const std::string& start, const std::string& end,
                              std::vector<std::string> cats = {"film"}) {
    builder::BuilderConfig cfg;
    cfg.window_start = start;
    cfg.window_end = end;
    cfg.categories = std::move(cats);
    return cfg;
}

std::filesystem::path fresh_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("config validation") {
    CHECK_THROWS(config("2024-06-01", "2024-06-01").validate());
    CHECK_THROWS(config("2024-06-01", "2025-06-01", {}).validate());
    CHECK_NOTHROW(config("2024-06-01", "2025-06-01").validate());
    CHECK(builder::default_categories().size() == 20);
}

TEST_CASE("temporal window is half-open [start, end)") {
    json doc = {{"entities",
                 json::array({entity("Q1", "2024-06-01", {"film"}),     // == start
                              entity("Q2", "2025-05-31", {"film"}),     // inside
                              entity("Q3", "2025-06-01", {"film"}),     // == end
                              entity("Q4", "2024-05-31", {"film"}),     // before
                              entity("Q5", "", {"film"})})}};           // no date
    builder::FixtureWikidataClient client(doc.dump(), 0);
    auto got = builder::fetch_emerging_entities(
        config("2024-06-01", "2025-06-01"), client);
    REQUIRE(got.size() == 2);
    CHECK(got[0].id == "Q1");
    CHECK(got[1].id == "Q2");
}

TEST_CASE("category whitelist with optional subclass expansion") {
    json doc = {{"entities",
                 json::array({entity("Q1", "2024-07-01", {"film"}),
                              entity("Q2", "2024-07-01", {"short film"}),
                              entity("Q3", "2024-07-01", {"opera"})})},
                {"subclasses", {{"film", {"short film"}}}}};
    builder::FixtureWikidataClient client(doc.dump(), 0);
    auto plain = builder::fetch_emerging_entities(
        config("2024-06-01", "2025-06-01"), client);
    REQUIRE(plain.size() == 1);
    CHECK(plain[0].id == "Q1");

    auto cfg = config("2024-06-01", "2025-06-01");
    cfg.subclass_expansion = true;
    auto expanded = builder::fetch_emerging_entities(cfg, client);
    REQUIRE(expanded.size() == 2);
    CHECK(expanded[1].id == "Q2");
}

TEST_CASE("cardinality filter drops groups strictly above the cap") {
    builder::RawEntityBundle b;
    b.id = "Q1";
    // relation r1: exactly max_card distinct tails -> survives
    for (int i = 0; i < 10; ++i)
        b.triples.push_back({"Q1", "r1", "T" + std::to_string(i)});
    // relation r2: max_card+1 distinct tails -> entire group dropped
    for (int i = 0; i < 11; ++i)
        b.triples.push_back({"Q1", "r2", "U" + std::to_string(i)});
    // duplicates don't count twice: 11 triples, 10 distinct -> survives
    for (int i = 0; i < 10; ++i)
        b.triples.push_back({"Q1", "r3", "V" + std::to_string(i)});
    b.triples.push_back({"Q1", "r3", "V0"});

    auto kept = builder::apply_cardinality_filter({b}, 10);
    std::size_t r1 = 0, r2 = 0, r3 = 0;
    for (const auto& t : kept) {
        if (t.relation == "r1") ++r1;
        if (t.relation == "r2") ++r2;
        if (t.relation == "r3") ++r3;
    }
    CHECK(r1 == 10);
    CHECK(r2 == 0);
    CHECK(r3 == 11);
}

TEST_CASE("hand-counted survivor set through the full pipeline") {
    json doc;
    auto& ents = doc["entities"] = json::array();
    // in-window film with a small relation group
    ents.push_back(entity("Q1", "2024-07-01", {"film"},
                          {{"Q1", "cast", "A"}, {"Q1", "cast", "B"}}));
    // in-window but wrong category
    ents.push_back(entity("Q2", "2024-07-01", {"opera"}, {{"Q2", "cast", "C"}}));
    // out-of-window film
    ents.push_back(entity("Q3", "2020-01-01", {"film"}, {{"Q3", "cast", "D"}}));
    // in-window film whose only relation group is too large
    std::vector<std::vector<std::string>> big;
    for (int i = 0; i < 11; ++i) big.push_back({"Q4", "genre", "G" + std::to_string(i)});
    ents.push_back(entity("Q4", "2024-08-01", {"film"}, big));

    builder::FixtureWikidataClient client(doc.dump(), 0);
    auto cfg = config("2024-06-01", "2025-06-01");
    auto bundles = builder::fetch_emerging_entities(cfg, client);
    auto kept = builder::apply_cardinality_filter(bundles, cfg.max_tail_cardinality);
    REQUIRE(kept.size() == 2);  // exactly Q1's two cast triples survive
    CHECK(kept[0] == kg::Triple{"Q1", "cast", "A"});
    CHECK(kept[1] == kg::Triple{"Q1", "cast", "B"});

    auto out = fresh_dir("agree-test-emit");
    auto manifest = builder::emit_benchmark(kept, bundles, out, cfg);
    CHECK(manifest.triple_count == 2);
    CHECK(manifest.relation_count == 1);
    CHECK(manifest.entity_count == 1);
    CHECK(std::filesystem::exists(out / "triples.tsv"));
    CHECK(std::filesystem::exists(out / "catalog.tsv"));
    CHECK(std::filesystem::exists(out / "manifest.json"));
    std::ifstream in(out / "triples.tsv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "Q1\tcast\tA");
}

namespace {

// client that fails after a set number of fetches, to simulate interruption
class FlakyClient : public builder::WikidataClient {
public:
    FlakyClient(builder::FixtureWikidataClient& inner, int budget)
        : inner_(inner), budget_(budget) {}
    std::vector<kg::EntityId> list_candidates(const builder::BuilderConfig& cfg) override {
        return inner_.list_candidates(cfg);
    }
    builder::RawEntityBundle fetch_entity(const kg::EntityId& id) override {
        if (fetches_ >= budget_) throw std::runtime_error("endpoint down");
        ++fetches_;
        return inner_.fetch_entity(id);
    }
    int fetches() const { return fetches_; }

private:
    builder::FixtureWikidataClient& inner_;
    int budget_;
    int fetches_ = 0;
};

}  // namespace

TEST_CASE("interrupted build resumes from the progress store") {
    json doc;
    auto& ents = doc["entities"] = json::array();
    for (int i = 0; i < 6; ++i)
        ents.push_back(entity("Q" + std::to_string(i), "2024-07-01", {"film"},
                              {{"Q" + std::to_string(i), "r", "T"}}));
    builder::FixtureWikidataClient fixture(doc.dump(), 0);
    auto cfg = config("2024-06-01", "2025-06-01");

    auto dir = fresh_dir("agree-test-resume");
    auto progress_file = dir / "progress.json";

    // first attempt dies after 3 fetches
    {
        builder::ProgressStore progress(progress_file);
        FlakyClient flaky(fixture, 3);
        CHECK_THROWS(builder::fetch_emerging_entities(cfg, flaky, &progress));
        CHECK(flaky.fetches() == 3);
    }
    // resume: only the remaining entities are fetched
    builder::ProgressStore progress(progress_file);
    FlakyClient second(fixture, 100);
    auto resumed = builder::fetch_emerging_entities(cfg, second, &progress);
    CHECK(second.fetches() == 3);
    // result matches an uninterrupted build
    auto full = builder::fetch_emerging_entities(cfg, fixture);
    REQUIRE(resumed.size() == full.size());
    for (std::size_t i = 0; i < full.size(); ++i)
        CHECK(resumed[i].id == full[i].id);
}
