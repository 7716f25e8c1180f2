#include "agree/kg.hpp"

#include <algorithm>
#include <sstream>

namespace agree::kg {

namespace {

std::string join_key(const std::string& a, const std::string& b) {
    // fields are TSV-safe, so '\t' cannot collide
    return a + '\t' + b;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find('\t', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

bool blank(const std::string& s) {
    return s.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

bool KnowledgeGraph::add(Triple t) {
    if (!seen_.insert(t).second) return false;
    auto pos = static_cast<std::uint32_t>(triples_.size());
    head_idx_[t.head].push_back(pos);
    tail_idx_[t.tail].push_back(pos);
    rel_idx_[t.relation].push_back(pos);
    head_rel_idx_[join_key(t.head, t.relation)].push_back(pos);
    tail_rel_idx_[join_key(t.tail, t.relation)].push_back(pos);
    triples_.push_back(std::move(t));
    return true;
}

std::vector<Triple> KnowledgeGraph::gather(
    const std::unordered_map<std::string, std::vector<std::uint32_t>>& idx,
    const std::string& key) const {
    std::vector<Triple> out;
    auto it = idx.find(key);
    if (it == idx.end()) return out;
    out.reserve(it->second.size());
    for (auto pos : it->second) out.push_back(triples_[pos]);
    return out;
}

std::vector<Triple> KnowledgeGraph::by_head(const EntityId& h) const {
    return gather(head_idx_, h);
}
std::vector<Triple> KnowledgeGraph::by_tail(const EntityId& t) const {
    return gather(tail_idx_, t);
}
std::vector<Triple> KnowledgeGraph::by_relation(const RelationId& r) const {
    return gather(rel_idx_, r);
}
std::vector<Triple> KnowledgeGraph::by_head_relation(const EntityId& h,
                                                     const RelationId& r) const {
    return gather(head_rel_idx_, join_key(h, r));
}
std::vector<Triple> KnowledgeGraph::by_tail_relation(const EntityId& t,
                                                     const RelationId& r) const {
    return gather(tail_rel_idx_, join_key(t, r));
}

KnowledgeGraph load_triples(std::istream& in, IngestStats* stats) {
    KnowledgeGraph kg;
    IngestStats local;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (blank(line)) continue;
        ++local.lines;
        auto fields = split_tabs(line);
        if (fields.size() != 3)
            throw ParseError(lineno, "expected 3 tab-separated fields, got " +
                                         std::to_string(fields.size()));
        for (const auto& f : fields)
            if (f.empty()) throw ParseError(lineno, "empty field");
        if (!kg.add({fields[0], fields[1], fields[2]})) ++local.duplicates;
    }
    if (stats) *stats = local;
    return kg;
}

Catalog load_entity_catalog(std::istream& in) {
    Catalog catalog;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (blank(line)) continue;
        auto fields = split_tabs(line);
        if (fields.size() < 2)
            throw ParseError(lineno, "expected at least id and label");
        if (fields.size() > 4)
            throw ParseError(lineno, "expected at most 4 fields");
        EntityRecord rec;
        rec.id = fields[0];
        rec.label = fields[1];
        if (rec.id.empty()) throw ParseError(lineno, "empty entity id");
        if (rec.label.empty()) throw ParseError(lineno, "empty label");
        if (catalog.count(rec.id))
            throw ParseError(lineno, "duplicate entity id " + rec.id);
        if (fields.size() >= 3 && !fields[2].empty()) {
            std::stringstream ss(fields[2]);
            std::string alias;
            while (std::getline(ss, alias, '|'))
                if (!alias.empty()) rec.aliases.push_back(alias);
        }
        if (std::find(rec.aliases.begin(), rec.aliases.end(), rec.label) ==
            rec.aliases.end())
            rec.aliases.insert(rec.aliases.begin(), rec.label);
        else if (rec.aliases.front() != rec.label) {
            // label must sit at position 0
            rec.aliases.erase(
                std::find(rec.aliases.begin(), rec.aliases.end(), rec.label));
            rec.aliases.insert(rec.aliases.begin(), rec.label);
        }
        if (fields.size() == 4) rec.description = fields[3];
        catalog.emplace(rec.id, std::move(rec));
    }
    return catalog;
}

std::vector<Triple> KnowledgeGraph::touching(const EntityId& e,
                                             std::size_t limit) const {
    std::vector<std::uint32_t> positions;
    if (auto it = head_idx_.find(e); it != head_idx_.end())
        positions.insert(positions.end(), it->second.begin(), it->second.end());
    if (auto it = tail_idx_.find(e); it != tail_idx_.end())
        positions.insert(positions.end(), it->second.begin(), it->second.end());
    std::sort(positions.begin(), positions.end());
    positions.erase(std::unique(positions.begin(), positions.end()),
                    positions.end());
    if (positions.size() > limit) positions.resize(limit);
    std::vector<Triple> out;
    out.reserve(positions.size());
    for (auto pos : positions) out.push_back(triples_[pos]);
    return out;
}

std::vector<Triple> neighborhood(const KnowledgeGraph& kg, const EntityId& e,
                                 std::size_t limit) {
    return kg.touching(e, limit);
}

std::vector<Triple> examples_for_relation(
    const KnowledgeGraph& kg, const RelationId& r, std::size_t k,
    const std::unordered_set<Triple, TripleHash>& exclude) {
    std::vector<Triple> out;
    for (auto& t : kg.by_relation(r)) {
        if (exclude.count(t)) continue;
        out.push_back(std::move(t));
        if (out.size() == k) break;
    }
    return out;
}

RelationCardinalityTable compute_relation_cardinality(const KnowledgeGraph& kg) {
    if (kg.empty())
        throw std::invalid_argument("compute_relation_cardinality: empty graph");
    RelationCardinalityTable table;
    // distinct counts per (entity, relation) pair; duplicates are impossible
    // because the graph stores a set of triples
    std::unordered_map<std::string, std::uint32_t> tails_per_head_rel;
    std::unordered_map<std::string, std::uint32_t> heads_per_tail_rel;
    for (const auto& t : kg.triples()) {
        ++tails_per_head_rel[t.head + '\t' + t.relation];
        ++heads_per_tail_rel[t.tail + '\t' + t.relation];
    }
    auto fold = [](const std::unordered_map<std::string, std::uint32_t>& counts,
                   std::map<RelationId, std::uint32_t>& out) {
        for (const auto& [key, n] : counts) {
            auto rel = key.substr(key.find('\t') + 1);
            auto& slot = out[rel];
            slot = std::max(slot, n);
        }
    };
    fold(tails_per_head_rel, table.tail_card);
    fold(heads_per_tail_rel, table.head_card);
    return table;
}

std::string to_string(const Triple& t) {
    return t.head + '\t' + t.relation + '\t' + t.tail;
}

std::string render_query(const Query& q) {
    if (q.direction == Query::Direction::Tail)
        return "(" + q.known_entity + ", " + q.relation + ", ?)";
    return "(?, " + q.relation + ", " + q.known_entity + ")";
}

}  // namespace agree::kg
