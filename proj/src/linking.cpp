#include "agree/linking.hpp"

#include <algorithm>
#include <stdexcept>

#include "agree/text.hpp"

namespace agree::linking {

const char* link_method_name(LinkMethod m) {
    switch (m) {
        case LinkMethod::Exact: return "EXACT";
        case LinkMethod::Fuzzy: return "FUZZY";
        case LinkMethod::Unlinked: return "UNLINKED";
    }
    return "?";
}

std::string normalize_surface(const std::string& s) {
    return text::normalize_surface(s);
}

namespace {

std::set<std::string> token_set(const std::string& normalized) {
    std::set<std::string> out;
    std::string cur;
    for (char c : normalized) {
        if (c == ' ') {
            if (!cur.empty()) out.insert(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.insert(cur);
    return out;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t inter = 0;
    for (const auto& t : a) inter += b.count(t);
    return static_cast<double>(inter) /
           static_cast<double>(a.size() + b.size() - inter);
}

}  // namespace

AliasIndex build_alias_index(const kg::Catalog& catalog, double fuzzy_threshold) {
    AliasIndex index;
    index.fuzzy_threshold = fuzzy_threshold;
    for (const auto& [id, rec] : catalog) {
        for (const auto& alias : rec.aliases) {
            auto norm = normalize_surface(alias);
            if (norm.empty()) continue;
            auto& ids = index.exact[norm];
            if (std::find(ids.begin(), ids.end(), id) == ids.end())
                ids.push_back(id);
            auto ts = token_set(norm);
            for (const auto& tok : ts) {
                auto& ents = index.token_to_entities[tok];
                if (ents.empty() || ents.back() != id) ents.push_back(id);
            }
            index.token_sets[id].push_back(std::move(ts));
        }
    }
    for (auto& [norm, ids] : index.exact) std::sort(ids.begin(), ids.end());
    for (auto& [tok, ids] : index.token_to_entities) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    }
    return index;
}

LinkResult link_one(const std::string& surface, const AliasIndex& index) {
    if (text::trim(surface).empty())
        throw std::invalid_argument("link_one: empty surface");
    LinkResult res;
    res.surface = surface;
    auto norm = normalize_surface(surface);
    if (auto it = index.exact.find(norm); it != index.exact.end()) {
        res.entity = it->second.front();  // smallest id
        res.method = LinkMethod::Exact;
        res.score = 1.0;
        res.collision = it->second.size() > 1;
        return res;
    }
    auto surface_tokens = token_set(norm);
    if (surface_tokens.empty()) return res;

    // candidates = entities sharing at least one token
    std::vector<kg::EntityId> candidates;
    for (const auto& tok : surface_tokens) {
        if (auto it = index.token_to_entities.find(tok);
            it != index.token_to_entities.end())
            candidates.insert(candidates.end(), it->second.begin(),
                              it->second.end());
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()),
                     candidates.end());

    double best = 0.0;
    std::optional<kg::EntityId> best_id;
    for (const auto& id : candidates) {
        const auto& alias_sets = index.token_sets.at(id);
        double entity_best = 0.0;
        for (const auto& ts : alias_sets)
            entity_best = std::max(entity_best, jaccard(surface_tokens, ts));
        // ties break to the lexicographically smallest id; candidates are
        // already sorted, so strictly-greater keeps the first
        if (entity_best > best) {
            best = entity_best;
            best_id = id;
        }
    }
    if (best_id && best >= index.fuzzy_threshold) {
        res.entity = *best_id;
        res.method = LinkMethod::Fuzzy;
        res.score = best;
    }
    return res;
}

std::vector<kg::EntityId> link_ranked(const agent::CandidateList& candidates,
                                      const AliasIndex& index,
                                      std::vector<LinkResult>* audit) {
    std::vector<kg::EntityId> out;
    std::set<kg::EntityId> seen;
    for (const auto& surface : candidates.surfaces) {
        if (text::trim(surface).empty()) continue;
        auto res = link_one(surface, index);
        if (audit) audit->push_back(res);
        if (res.entity && seen.insert(*res.entity).second)
            out.push_back(*res.entity);
    }
    return out;
}

}  // namespace agree::linking
