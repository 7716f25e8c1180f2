#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

// Knowledge-graph data model: triples, catalogs, indices, and the
// per-relation cardinality table that relation-aware scoring consumes.
namespace agree::kg {

using EntityId = std::string;
using RelationId = std::string;

struct Triple {
    EntityId head;
    RelationId relation;
    EntityId tail;

    auto operator<=>(const Triple&) const = default;
};

struct TripleHash {
    std::size_t operator()(const Triple& t) const noexcept {
        std::hash<std::string> h;
        std::size_t seed = h(t.head);
        seed ^= h(t.relation) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
        seed ^= h(t.tail) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
        return seed;
    }
};

struct EntityRecord {
    EntityId id;
    std::string label;
    std::vector<std::string> aliases;  // label always at position 0
    std::string description;
};

using Catalog = std::map<EntityId, EntityRecord>;

struct Query {
    enum class Direction { Tail, Head };
    Direction direction = Direction::Tail;
    EntityId known_entity;
    RelationId relation;
};

struct EvalCase {
    Query query;
    EntityId gold;
};

struct RelationCardinalityTable {
    std::map<RelationId, std::uint32_t> tail_card;
    std::map<RelationId, std::uint32_t> head_card;

    std::optional<std::uint32_t> cardinality(const RelationId& r,
                                             Query::Direction dir) const {
        const auto& m = dir == Query::Direction::Tail ? tail_card : head_card;
        auto it = m.find(r);
        if (it == m.end()) return std::nullopt;
        return it->second;
    }
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct IngestStats {
    std::size_t lines = 0;       // non-blank lines seen
    std::size_t duplicates = 0;  // dropped duplicate triples
};

// Immutable after construction; indices hold positions into triples() so
// every lookup preserves first-seen ingestion order.
class KnowledgeGraph {
public:
    bool add(Triple t);  // false if duplicate

    const std::vector<Triple>& triples() const { return triples_; }
    bool contains(const Triple& t) const { return seen_.count(t) > 0; }
    std::size_t size() const { return triples_.size(); }
    bool empty() const { return triples_.empty(); }

    std::vector<Triple> by_head(const EntityId& h) const;
    std::vector<Triple> by_tail(const EntityId& t) const;
    std::vector<Triple> by_relation(const RelationId& r) const;
    std::vector<Triple> by_head_relation(const EntityId& h, const RelationId& r) const;
    std::vector<Triple> by_tail_relation(const EntityId& t, const RelationId& r) const;

    bool has_entity(const EntityId& e) const {
        return head_idx_.count(e) > 0 || tail_idx_.count(e) > 0;
    }

    // Triples touching e on either side, global first-seen order.
    std::vector<Triple> touching(const EntityId& e, std::size_t limit) const;

private:
    std::vector<Triple> triples_;
    std::unordered_set<Triple, TripleHash> seen_;
    std::unordered_map<std::string, std::vector<std::uint32_t>> head_idx_;
    std::unordered_map<std::string, std::vector<std::uint32_t>> tail_idx_;
    std::unordered_map<std::string, std::vector<std::uint32_t>> rel_idx_;
    std::unordered_map<std::string, std::vector<std::uint32_t>> head_rel_idx_;
    std::unordered_map<std::string, std::vector<std::uint32_t>> tail_rel_idx_;

    std::vector<Triple> gather(const std::unordered_map<std::string, std::vector<std::uint32_t>>& idx,
                               const std::string& key) const;
};

// 3-column TSV, one triple per line, duplicates dropped (counted in stats).
KnowledgeGraph load_triples(std::istream& in, IngestStats* stats = nullptr);

// 4-column TSV: id, label, pipe-separated aliases, optional description.
Catalog load_entity_catalog(std::istream& in);

// Up to `limit` triples touching e (head or tail side), first-seen order.
// Empty for entities absent from the graph.
std::vector<Triple> neighborhood(const KnowledgeGraph& kg, const EntityId& e,
                                 std::size_t limit);

// Up to k triples with relation r, skipping anything in `exclude` so the
// gold triple never leaks into a prompt.
std::vector<Triple> examples_for_relation(
    const KnowledgeGraph& kg, const RelationId& r, std::size_t k,
    const std::unordered_set<Triple, TripleHash>& exclude = {});

// tail_card[r] = max over heads of distinct-tail count; head_card symmetric.
// Relations absent from the graph get no entry.
RelationCardinalityTable compute_relation_cardinality(const KnowledgeGraph& kg);

std::string to_string(const Triple& t);  // TSV rendering
std::string render_query(const Query& q);  // "(h, r, ?)" / "(?, r, t)"

}  // namespace agree::kg
