#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "agree/agent.hpp"
#include "agree/builder.hpp"
#include "agree/cache.hpp"
#include "agree/config.hpp"
#include "agree/linking.hpp"
#include "agree/metrics.hpp"

// Run orchestration: concurrent evaluation, trajectory logs, replay-cached
// clients, report emission.
namespace agree::runner {

// Offline search fixture, JSON:
// {"basic": {"<query>": [{"source_id","title","text"}, ...]}, "advanced": {...}}
class FixtureSearchClient : public retrieval::SearchClient {
public:
    FixtureSearchClient(const std::filesystem::path& json_path,
                        retrieval::ToolKind tool);
    FixtureSearchClient(const nlohmann::json& doc, retrieval::ToolKind tool);
    std::vector<retrieval::Document> search(const std::string& query) override;

private:
    std::map<std::string, std::vector<retrieval::Document>> by_query_;
};

// Throws on every call; stands in for the network when replay closure is
// being asserted.
class FailingSearchClient : public retrieval::SearchClient {
public:
    std::vector<retrieval::Document> search(const std::string& query) override;
};

// Routes another client's responses through the replay cache; counts real
// (non-cache) calls.
class CachedSearchClient : public retrieval::SearchClient {
public:
    CachedSearchClient(retrieval::SearchClient& inner, cache::ReplayCache& cache,
                       cache::Kind kind);
    std::vector<retrieval::Document> search(const std::string& query) override;
    std::size_t network_calls() const { return fetch_.network_calls(); }

private:
    cache::CachedFetch fetch_;
};

nlohmann::json trajectory_to_json(const agent::Trajectory& t);
agent::Trajectory trajectory_from_json(const nlohmann::json& j);

struct RunReport {
    metrics::MetricReport metric_report;
    metrics::RetrieverUsage usage;
    double mean_iterations = 0.0;  // mean LLM turns per case
    std::map<std::string, std::size_t> terminated_by;
    std::size_t cache_hits = 0;
    std::size_t cache_misses = 0;
    std::size_t network_calls = 0;
    std::size_t failed_cases = 0;  // degraded to empty predictions
    nlohmann::json report_json;    // what report.json contains (no timestamps)
};

// Loads data, runs the agent over every test case with bounded concurrency,
// links, scores, and writes report.json / report.txt / trajectories.jsonl /
// linking_audit.tsv / per_case.csv / config_snapshot into out_dir.
RunReport run_eval(const config::RunConfig& cfg,
                   const std::filesystem::path& out_dir);

// CLI wrapper around the dataset builder with resume-from-progress.
builder::Manifest build_emerging(const builder::BuilderConfig& cfg,
                                 builder::WikidataClient& client,
                                 const std::filesystem::path& out_dir);

// Renders the stored trajectory for one case; throws with the available ids
// when the case is unknown.
std::string show_trajectory(const std::filesystem::path& run_dir,
                            const std::string& case_id);

// Metrics-only mode over precomputed predictions (JSONL) and a train graph.
metrics::MetricReport score_predictions(const std::filesystem::path& predictions_jsonl,
                                        const std::filesystem::path& train_tsv,
                                        const std::vector<std::size_t>& metrics_n,
                                        bool ra_literal_rule = false);

// Test cases from a triples TSV: one case per line for tail/head, two for both.
std::vector<kg::EvalCase> load_eval_cases(const std::filesystem::path& test_tsv,
                                          const std::string& direction);

}  // namespace agree::runner
