#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agree/agent.hpp"
#include "agree/kg.hpp"

// Scoring: Hits@N, MRR, relation-aware Hits@N, retriever-usage statistics.
namespace agree::metrics {

struct RankedPrediction {
    kg::EvalCase eval_case;
    std::vector<kg::EntityId> entities;  // ranked, no duplicates
    std::string trajectory_ref;
};

struct MetricValue {
    double value = 0.0;
    std::size_t support = 0;
    bool defined = true;  // false when support is 0 -> rendered "n/a"
};

struct MetricReport {
    std::map<std::size_t, MetricValue> hits;     // N -> Hits@N
    double mrr = 0.0;
    std::map<std::size_t, MetricValue> ra_hits;  // N -> relation-aware Hits@N
    std::map<std::size_t, std::size_t> ra_unsupported;  // cases with no train entry
    std::size_t case_count = 0;
};

struct RetrieverUsage {
    std::size_t basic_calls = 0;
    std::size_t advanced_calls = 0;
    std::size_t no_retrieval_cases = 0;
    std::size_t cases = 0;
};

// 1-based rank of the gold entity; nullopt when absent (rank infinity).
std::optional<std::size_t> rank_of_gold(const RankedPrediction& p);

// (1/|T|) * sum 1[rank <= n]; throws on empty input.
double hits_at_n(const std::vector<RankedPrediction>& preds, std::size_t n);

// (1/|T|) * sum 1/rank, 0 for missing gold; throws on empty input.
double mrr(const std::vector<RankedPrediction>& preds);

struct RaHitsOptions {
    // Implemented rule: evaluate a case at N only when N_rel <= N (the
    // relation's full answer set fits in N guesses). The literal-equation
    // variant (N <= N_rel) is available for side-by-side comparison.
    bool literal_rule = false;
};

struct RaHitsResult {
    MetricValue metric;
    std::size_t unsupported = 0;  // relation absent from the training table
};

RaHitsResult relation_aware_hits(const std::vector<RankedPrediction>& preds,
                                 const kg::RelationCardinalityTable& table,
                                 std::size_t n, RaHitsOptions opts = {});

RetrieverUsage retriever_usage(const std::vector<agent::Trajectory>& trajectories);

MetricReport score(const std::vector<RankedPrediction>& preds,
                   const kg::RelationCardinalityTable& table,
                   const std::vector<std::size_t>& metrics_n,
                   RaHitsOptions opts = {});

// Human-readable table; percentages to one decimal.
std::string render_report(const MetricReport& report);

}  // namespace agree::metrics
