#include <doctest.h>

#include <random>

#include "agree/linking.hpp"
#include "agree/text.hpp"

using namespace agree;

namespace {

kg::Catalog make_catalog(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& entries) {
    kg::Catalog cat;
    for (const auto& [id, aliases] : entries) {
        kg::EntityRecord rec;
        rec.id = id;
        rec.label = aliases.front();
        rec.aliases = aliases;
        cat[id] = rec;
    }
    return cat;
}

}  // namespace

TEST_CASE("exact match wins and reports collisions") {
    auto cat = make_catalog({{"Q2", {"Paris"}},
                             {"Q1", {"Paris", "Paris, Texas"}},
                             {"Q3", {"London"}}});
    auto index = linking::build_alias_index(cat);
    auto res = linking::link_one("paris", index);
    CHECK(res.method == linking::LinkMethod::Exact);
    CHECK(res.entity == "Q1");  // smallest id among colliding entries
    CHECK(res.collision);
    CHECK(res.score == 1.0);

    auto london = linking::link_one("LONDON", index);
    CHECK(london.entity == "Q3");
    CHECK(!london.collision);
}

TEST_CASE("exact match normalizes diacritics and punctuation") {
    auto cat = make_catalog({{"Q1", {"1. FC Köln"}}});
    auto index = linking::build_alias_index(cat);
    auto res = linking::link_one("1 FC Koln", index);
    CHECK(res.method == linking::LinkMethod::Exact);
    CHECK(res.entity == "Q1");
}

TEST_CASE("fuzzy linking accepts a 3/4 jaccard overlap") {
    auto cat = make_catalog({{"Q1", {"alpha beta gamma delta"}}});
    auto index = linking::build_alias_index(cat);
    auto res = linking::link_one("alpha beta gamma", index);
    CHECK(res.method == linking::LinkMethod::Fuzzy);
    CHECK(res.entity == "Q1");
    CHECK(res.score == doctest::Approx(0.75));
}

TEST_CASE("fuzzy linking rejects below threshold and ties to smallest id") {
    auto cat = make_catalog({{"Q5", {"red green"}},
                             {"Q2", {"red blue"}},
                             {"Q9", {"unrelated thing"}}});
    auto index = linking::build_alias_index(cat);
    // 1/3 overlap with both: below 0.5 -> unlinked
    auto lo = linking::link_one("red violet", index);
    CHECK(lo.method == linking::LinkMethod::Unlinked);
    CHECK(!lo.entity);
    // "red green blue" ties Q2 and Q5 at 2/3: smallest id wins
    auto tie = linking::link_one("red green blue", index);
    CHECK(tie.method == linking::LinkMethod::Fuzzy);
    CHECK(tie.entity == "Q2");
    CHECK(tie.score == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("link_one rejects blank surfaces") {
    auto index = linking::build_alias_index({});
    CHECK_THROWS_AS(linking::link_one("   ", index), std::invalid_argument);
}

TEST_CASE("link_ranked preserves order, drops unlinked, dedupes") {
    auto cat = make_catalog(
        {{"Q1", {"Alpha"}}, {"Q2", {"Beta"}}, {"Q3", {"Gamma"}}});
    auto index = linking::build_alias_index(cat);
    agent::CandidateList cands{{"Beta", "nosuchentity", "Alpha", "beta", ""}};
    std::vector<linking::LinkResult> audit;
    auto ids = linking::link_ranked(cands, index, &audit);
    CHECK(ids == std::vector<kg::EntityId>{"Q2", "Q1"});
    // blank surfaces are skipped entirely; the rest get an audit row each
    CHECK(audit.size() == 4);
    CHECK(audit[1].method == linking::LinkMethod::Unlinked);
}

TEST_CASE("linking preserves candidate rank (monotonicity)") {
    auto cat = make_catalog({{"Q1", {"One"}}, {"Q2", {"Two"}}, {"Q3", {"Three"}}});
    auto index = linking::build_alias_index(cat);
    agent::CandidateList abc{{"One", "Two", "Three"}};
    agent::CandidateList cba{{"Three", "Two", "One"}};
    CHECK(linking::link_ranked(abc, index) ==
          std::vector<kg::EntityId>{"Q1", "Q2", "Q3"});
    CHECK(linking::link_ranked(cba, index) ==
          std::vector<kg::EntityId>{"Q3", "Q2", "Q1"});
}

TEST_CASE("link_one agrees with a brute-force jaccard oracle") {
    std::mt19937 rng(17);
    const std::vector<std::string> vocab = {"ant", "bee", "cat", "dog", "eel",
                                            "fox", "gnu", "hen", "ibis", "jay"};
    auto random_phrase = [&](int max_words) {
        std::set<std::string> words;
        int n = 1 + rng() % max_words;
        for (int i = 0; i < n; ++i) words.insert(vocab[rng() % vocab.size()]);
        std::string s;
        for (const auto& w : words) {
            if (!s.empty()) s += ' ';
            s += w;
        }
        return s;
    };
    for (int iter = 0; iter < 50; ++iter) {
        kg::Catalog cat;
        int ents = 2 + rng() % 8;
        for (int e = 0; e < ents; ++e) {
            kg::EntityRecord rec;
            rec.id = "Q" + std::to_string(10 + e);
            int na = 1 + rng() % 3;
            for (int a = 0; a < na; ++a) rec.aliases.push_back(random_phrase(4));
            rec.label = rec.aliases.front();
            cat[rec.id] = rec;
        }
        auto index = linking::build_alias_index(cat);
        for (int probe = 0; probe < 6; ++probe) {
            auto surface = random_phrase(4);
            auto got = linking::link_one(surface, index);

            // oracle: scan every alias of every entity
            auto tokens_of = [](const std::string& s) {
                std::set<std::string> out;
                for (const auto& t : text::tokenize(s)) out.insert(t);
                return out;
            };
            auto stoks = tokens_of(text::normalize_surface(surface));
            std::optional<kg::EntityId> best_exact;
            double best_score = 0.0;
            std::optional<kg::EntityId> best_fuzzy;
            for (const auto& [id, rec] : cat) {
                for (const auto& alias : rec.aliases) {
                    auto anorm = text::normalize_surface(alias);
                    if (anorm == text::normalize_surface(surface) &&
                        (!best_exact || id < *best_exact))
                        best_exact = id;
                    auto atoks = tokens_of(anorm);
                    std::size_t inter = 0;
                    for (const auto& t : stoks) inter += atoks.count(t);
                    double denom =
                        static_cast<double>(stoks.size() + atoks.size() - inter);
                    double j = denom == 0 ? 0.0 : inter / denom;
                    if (j > best_score) {
                        best_score = j;
                        best_fuzzy = id;
                    }
                }
            }
            CAPTURE(surface);
            if (best_exact) {
                CHECK(got.method == linking::LinkMethod::Exact);
                CHECK(got.entity == *best_exact);
            } else if (best_score >= 0.5) {
                CHECK(got.method == linking::LinkMethod::Fuzzy);
                CHECK(got.entity == *best_fuzzy);
                CHECK(got.score == doctest::Approx(best_score));
            } else {
                CHECK(got.method == linking::LinkMethod::Unlinked);
            }
        }
    }
}
