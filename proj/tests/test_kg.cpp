#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <sstream>

#include "agree/kg.hpp"

using namespace agree;

namespace {

kg::KnowledgeGraph graph_from(const std::string& tsv, kg::IngestStats* stats = nullptr) {
    std::istringstream in(tsv);
    return kg::load_triples(in, stats);
}

}  // namespace

TEST_CASE("load_triples basic construction and indices") {
    auto g = graph_from("A\tr\tB\nA\tr\tC\n");
    CHECK(g.size() == 2);
    auto hr = g.by_head_relation("A", "r");
    REQUIRE(hr.size() == 2);
    CHECK(hr[0] == kg::Triple{"A", "r", "B"});
    CHECK(hr[1] == kg::Triple{"A", "r", "C"});
}

TEST_CASE("load_triples drops duplicates and counts them") {
    kg::IngestStats stats;
    auto g = graph_from("A\tr\tB\nA\tr\tB\n", &stats);
    CHECK(g.size() == 1);
    CHECK(stats.duplicates == 1);
    CHECK(stats.lines == 2);
}

TEST_CASE("load_triples tolerates CRLF and blank lines") {
    auto g = graph_from("A\tr\tB\r\n\nC\tr\tD\n");
    CHECK(g.size() == 2);
    CHECK(g.contains({"C", "r", "D"}));
}

TEST_CASE("load_triples rejects malformed lines with line numbers") {
    CHECK_THROWS_AS(graph_from("A\tr\tB\nbad line\n"), kg::ParseError);
    try {
        graph_from("A\tr\tB\nA\tr\n");
    } catch (const kg::ParseError& e) {
        CHECK(e.line() == 2);
    }
    // empty field
    CHECK_THROWS_AS(graph_from("A\t\tB\n"), kg::ParseError);
}

TEST_CASE("load_triples idempotent under re-ingestion of its own output") {
    auto g = graph_from("A\tr\tB\nC\ts\tD\nA\tr\tC\n");
    std::string out;
    for (const auto& t : g.triples()) out += kg::to_string(t) + "\n";
    auto g2 = graph_from(out);
    CHECK(g.triples() == g2.triples());
}

TEST_CASE("load_entity_catalog field handling") {
    std::istringstream in(
        "Q1\tUs\tUs (TV series)\tThai TV series\n"
        "Q2\tLabelOnly\n");
    auto cat = kg::load_entity_catalog(in);
    REQUIRE(cat.count("Q1") == 1);
    const auto& rec = cat.at("Q1");
    CHECK(rec.label == "Us");
    REQUIRE(rec.aliases.size() == 2);
    CHECK(rec.aliases[0] == "Us");
    CHECK(rec.aliases[1] == "Us (TV series)");
    CHECK(rec.description == "Thai TV series");
    CHECK(cat.at("Q2").aliases == std::vector<std::string>{"LabelOnly"});
}

TEST_CASE("load_entity_catalog rejects short lines and duplicate ids") {
    {
        std::istringstream in("Q1\n");
        CHECK_THROWS_AS(kg::load_entity_catalog(in), kg::ParseError);
    }
    {
        std::istringstream in("Q1\tA\nQ1\tB\n");
        CHECK_THROWS_AS(kg::load_entity_catalog(in), kg::ParseError);
    }
}

TEST_CASE("neighborhood membership, order, and limit") {
    auto g = graph_from("A\tr\tB\nX\ts\tA\nC\tr\tD\nA\tt\tE\n");
    CHECK(kg::neighborhood(g, "missing", 5).empty());
    auto tail_side = kg::neighborhood(g, "B", 5);
    REQUIRE(tail_side.size() == 1);
    CHECK(tail_side[0] == kg::Triple{"A", "r", "B"});
    // first-seen order mixes head- and tail-side hits
    auto around_a = kg::neighborhood(g, "A", 10);
    REQUIRE(around_a.size() == 3);
    CHECK(around_a[0] == kg::Triple{"A", "r", "B"});
    CHECK(around_a[1] == kg::Triple{"X", "s", "A"});
    CHECK(around_a[2] == kg::Triple{"A", "t", "E"});
    CHECK(kg::neighborhood(g, "A", 2).size() == 2);
}

TEST_CASE("neighborhood limit on a 12-triple fixture") {
    std::string tsv;
    for (int i = 0; i < 12; ++i)
        tsv += "E\tr" + std::to_string(i) + "\tT" + std::to_string(i) + "\n";
    auto g = graph_from(tsv);
    auto got = kg::neighborhood(g, "E", 10);
    CHECK(got.size() == 10);
    for (const auto& t : got) CHECK(t.head == "E");
}

TEST_CASE("neighborhood returns subsets of the graph containing e") {
    std::mt19937 rng(7);
    for (int iter = 0; iter < 50; ++iter) {
        kg::KnowledgeGraph g;
        for (int i = 0; i < 60; ++i)
            g.add({"E" + std::to_string(rng() % 10), "r" + std::to_string(rng() % 4),
                   "E" + std::to_string(rng() % 10)});
        std::string e = "E" + std::to_string(rng() % 10);
        for (const auto& t : kg::neighborhood(g, e, 100)) {
            CHECK(g.contains(t));
            CHECK((t.head == e || t.tail == e));
        }
    }
}

TEST_CASE("examples_for_relation exclusion and cap") {
    auto g = graph_from("A\tr\tB\nC\tr\tD\n");
    CHECK(kg::examples_for_relation(g, "unseen", 5).empty());
    std::unordered_set<kg::Triple, kg::TripleHash> exclude{{"A", "r", "B"}};
    auto got = kg::examples_for_relation(g, "r", 5, exclude);
    REQUIRE(got.size() == 1);
    CHECK(got[0] == kg::Triple{"C", "r", "D"});

    std::string tsv;
    for (int i = 0; i < 7; ++i)
        tsv += "H" + std::to_string(i) + "\trel\tT" + std::to_string(i) + "\n";
    auto g2 = graph_from(tsv);
    auto first3 = kg::examples_for_relation(g2, "rel", 3);
    REQUIRE(first3.size() == 3);
    CHECK(first3[0].head == "H0");
    CHECK(first3[2].head == "H2");
}

TEST_CASE("index lookups agree with a brute-force scan") {
    std::mt19937 rng(11);
    for (int iter = 0; iter < 20; ++iter) {
        kg::KnowledgeGraph g;
        std::vector<kg::Triple> all;
        for (int i = 0; i < 200; ++i) {
            kg::Triple t{"E" + std::to_string(rng() % 15),
                         "r" + std::to_string(rng() % 5),
                         "E" + std::to_string(rng() % 15)};
            if (g.add(t)) all.push_back(t);
        }
        std::string h = "E" + std::to_string(rng() % 15);
        std::string r = "r" + std::to_string(rng() % 5);
        std::vector<kg::Triple> expect_h, expect_hr, expect_r;
        for (const auto& t : all) {
            if (t.head == h) expect_h.push_back(t);
            if (t.head == h && t.relation == r) expect_hr.push_back(t);
            if (t.relation == r) expect_r.push_back(t);
        }
        CHECK(g.by_head(h) == expect_h);
        CHECK(g.by_head_relation(h, r) == expect_hr);
        CHECK(g.by_relation(r) == expect_r);
    }
}

TEST_CASE("cardinality on hand-checked fixtures") {
    auto g = graph_from("A\tocc\tX\nA\tocc\tY\nB\tocc\tZ\n");
    auto table = kg::compute_relation_cardinality(g);
    CHECK(table.tail_card.at("occ") == 2);
    CHECK(table.head_card.at("occ") == 1);

    auto single = graph_from("A\tr\tB\n");
    auto t2 = kg::compute_relation_cardinality(single);
    CHECK(t2.tail_card.at("r") == 1);
    CHECK(t2.head_card.at("r") == 1);

    // duplicates do not inflate counts (second copy is dropped at ingest)
    auto dup = graph_from("A\tr\tB\nA\tr\tB\n");
    CHECK(kg::compute_relation_cardinality(dup).tail_card.at("r") == 1);
}

TEST_CASE("cardinality rejects an empty graph") {
    kg::KnowledgeGraph g;
    CHECK_THROWS(kg::compute_relation_cardinality(g));
}

TEST_CASE("cardinality matches a brute-force double loop on random graphs") {
    std::mt19937 rng(42);
    for (int iter = 0; iter < 100; ++iter) {
        kg::KnowledgeGraph g;
        std::uniform_int_distribution<int> ent(0, 40), rel(0, 7), count(1, 1000);
        int n = count(rng);
        for (int i = 0; i < n; ++i)
            g.add({"E" + std::to_string(ent(rng)), "r" + std::to_string(rel(rng)),
                   "E" + std::to_string(ent(rng))});
        if (g.empty()) continue;
        auto table = kg::compute_relation_cardinality(g);

        // oracle: independent double loop over the triple list
        std::map<std::string, std::map<std::string, std::set<std::string>>> tails,
            heads;
        for (const auto& t : g.triples()) {
            tails[t.relation][t.head].insert(t.tail);
            heads[t.relation][t.tail].insert(t.head);
        }
        std::map<std::string, std::uint32_t> tail_card, head_card;
        for (const auto& [r, m] : tails)
            for (const auto& [_, s] : m)
                tail_card[r] = std::max<std::uint32_t>(tail_card[r], s.size());
        for (const auto& [r, m] : heads)
            for (const auto& [_, s] : m)
                head_card[r] = std::max<std::uint32_t>(head_card[r], s.size());
        CHECK(table.tail_card == tail_card);
        CHECK(table.head_card == head_card);
        for (const auto& [r, v] : table.tail_card) CHECK(v >= 1);
    }
}

TEST_CASE("render_query directions") {
    CHECK(kg::render_query({kg::Query::Direction::Tail, "A", "r"}) == "(A, r, ?)");
    CHECK(kg::render_query({kg::Query::Direction::Head, "B", "r"}) == "(?, r, B)");
}
