#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "agree/agent.hpp"
#include "agree/kg.hpp"

// Map the agent's surface-string candidates onto KG entity ids: exact
// normalized match first, then best token-set Jaccard over aliases.
namespace agree::linking {

struct AliasIndex {
    // normalized surface -> entity ids sorted ascending
    std::map<std::string, std::vector<kg::EntityId>> exact;
    // entity -> one token set per alias
    std::map<kg::EntityId, std::vector<std::set<std::string>>> token_sets;
    // token -> entities having it in some alias (restricts fuzzy candidates)
    std::map<std::string, std::vector<kg::EntityId>> token_to_entities;
    double fuzzy_threshold = 0.5;
};

enum class LinkMethod { Exact, Fuzzy, Unlinked };
const char* link_method_name(LinkMethod m);

struct LinkResult {
    std::string surface;
    std::optional<kg::EntityId> entity;
    LinkMethod method = LinkMethod::Unlinked;
    double score = 0.0;  // 1 for exact, Jaccard for fuzzy
    bool collision = false;  // exact surface mapped to several entities
};

// See text::normalize_surface; re-exported under the module the spec
// assigns it to.
std::string normalize_surface(const std::string& s);

AliasIndex build_alias_index(const kg::Catalog& catalog,
                             double fuzzy_threshold = 0.5);

LinkResult link_one(const std::string& surface, const AliasIndex& index);

// Link in order, drop unlinked, de-duplicate ids keeping the earliest.
// Output order defines the prediction rank. Optionally records one audit
// row per surface.
std::vector<kg::EntityId> link_ranked(const agent::CandidateList& candidates,
                                      const AliasIndex& index,
                                      std::vector<LinkResult>* audit = nullptr);

}  // namespace agree::linking
