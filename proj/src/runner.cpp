#include "agree/runner.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "agree/text.hpp"

namespace agree::runner {

using nlohmann::json;

// ---------------------------------------------------------------------------
// clients

FixtureSearchClient::FixtureSearchClient(const std::filesystem::path& json_path,
                                         retrieval::ToolKind tool) {
    std::ifstream in(json_path);
    if (!in)
        throw std::runtime_error("fixture corpus: cannot open " +
                                 json_path.string());
    json doc;
    in >> doc;
    *this = FixtureSearchClient(doc, tool);
}

FixtureSearchClient::FixtureSearchClient(const json& doc,
                                         retrieval::ToolKind tool) {
    const char* section = tool == retrieval::ToolKind::Basic ? "basic" : "advanced";
    if (!doc.contains(section)) return;
    for (const auto& [query, docs] : doc[section].items()) {
        std::vector<retrieval::Document> out;
        for (const auto& d : docs) {
            retrieval::Document doc_out;
            doc_out.source_id = d.value("source_id", "");
            doc_out.title = d.value("title", "");
            doc_out.text = d.value("text", "");
            doc_out.tool = tool;
            out.push_back(std::move(doc_out));
        }
        by_query_.emplace(query, std::move(out));
    }
}

std::vector<retrieval::Document> FixtureSearchClient::search(const std::string& query) {
    auto it = by_query_.find(query);
    if (it == by_query_.end()) return {};
    return it->second;
}

std::vector<retrieval::Document> FailingSearchClient::search(const std::string& query) {
    throw std::runtime_error("network disabled: live call attempted for \"" +
                             query + "\"");
}

namespace {

json documents_to_json(const std::vector<retrieval::Document>& docs) {
    json arr = json::array();
    for (const auto& d : docs)
        arr.push_back({{"source_id", d.source_id},
                       {"title", d.title},
                       {"text", d.text}});
    return arr;
}

std::vector<retrieval::Document> documents_from_json(const json& arr,
                                                     retrieval::ToolKind tool) {
    std::vector<retrieval::Document> out;
    for (const auto& d : arr) {
        retrieval::Document doc;
        doc.source_id = d.value("source_id", "");
        doc.title = d.value("title", "");
        doc.text = d.value("text", "");
        doc.tool = tool;
        out.push_back(std::move(doc));
    }
    return out;
}

}  // namespace

CachedSearchClient::CachedSearchClient(retrieval::SearchClient& inner,
                                       cache::ReplayCache& cache, cache::Kind kind)
    : fetch_(cache, kind, [&inner](const std::string& request) {
          auto query = json::parse(request).at("query").get<std::string>();
          return documents_to_json(inner.search(query)).dump();
      }) {}

std::vector<retrieval::Document> CachedSearchClient::search(const std::string& query) {
    json request = {{"query", query}};
    auto reply = fetch_(request.dump());
    return documents_from_json(json::parse(reply), retrieval::ToolKind::Basic);
}

// ---------------------------------------------------------------------------
// trajectory serialization

json trajectory_to_json(const agent::Trajectory& t) {
    json steps = json::array();
    for (const auto& s : t.steps) {
        // timestamps stay out of the serialized form so warm-cache re-runs
        // are byte-identical
        json step = {{"index", s.index}, {"observation", s.observation}};
        switch (s.action.kind) {
            case agent::AgentAction::Kind::ToolCall:
                step["kind"] = "tool_call";
                step["tool"] = retrieval::tool_name(s.action.tool);
                step["query"] = s.action.query;
                break;
            case agent::AgentAction::Kind::Reflect:
                step["kind"] = "reflect";
                step["text"] = s.action.text;
                step["sufficient"] = s.action.sufficient;
                break;
            case agent::AgentAction::Kind::Answer:
                step["kind"] = "answer";
                step["text"] = s.action.text;
                break;
        }
        steps.push_back(std::move(step));
    }
    return {{"case_id", t.case_id},
            {"query",
             {{"direction",
               t.eval_case.query.direction == kg::Query::Direction::Tail
                   ? "tail"
                   : "head"},
              {"known_entity", t.eval_case.query.known_entity},
              {"relation", t.eval_case.query.relation}}},
            {"gold", t.eval_case.gold},
            {"steps", steps},
            {"tools_used",
             {{"basic", t.tools_used.basic}, {"advanced", t.tools_used.advanced}}},
            {"final_candidates", t.final_candidates},
            {"terminated_by", agent::terminated_by_name(t.terminated_by)},
            {"salvaged", t.salvaged},
            {"llm_calls", t.llm_calls}};
}

agent::Trajectory trajectory_from_json(const json& j) {
    agent::Trajectory t;
    t.case_id = j.value("case_id", "");
    t.eval_case.query.direction = j.at("query").at("direction") == "tail"
                                      ? kg::Query::Direction::Tail
                                      : kg::Query::Direction::Head;
    t.eval_case.query.known_entity = j.at("query").at("known_entity");
    t.eval_case.query.relation = j.at("query").at("relation");
    t.eval_case.gold = j.at("gold");
    for (const auto& s : j.at("steps")) {
        agent::StepRecord step;
        step.index = s.at("index").get<std::size_t>();
        step.observation = s.value("observation", "");
        step.timestamp = s.value("timestamp", "");
        auto kind = s.at("kind").get<std::string>();
        if (kind == "tool_call") {
            step.action.kind = agent::AgentAction::Kind::ToolCall;
            step.action.tool =
                retrieval::tool_from_name(s.at("tool").get<std::string>());
            step.action.query = s.value("query", "");
        } else if (kind == "reflect") {
            step.action.kind = agent::AgentAction::Kind::Reflect;
            step.action.text = s.value("text", "");
            step.action.sufficient = s.value("sufficient", false);
        } else {
            step.action.kind = agent::AgentAction::Kind::Answer;
            step.action.text = s.value("text", "");
        }
        t.steps.push_back(std::move(step));
    }
    t.tools_used.basic = j.at("tools_used").at("basic").get<std::size_t>();
    t.tools_used.advanced = j.at("tools_used").at("advanced").get<std::size_t>();
    t.final_candidates =
        j.at("final_candidates").get<std::vector<std::string>>();
    auto term = j.at("terminated_by").get<std::string>();
    t.terminated_by = term == "ANSWERED" ? agent::TerminatedBy::Answered
                      : term == "ITERATION_BUDGET"
                          ? agent::TerminatedBy::IterationBudget
                          : agent::TerminatedBy::FormatBudget;
    t.salvaged = j.value("salvaged", false);
    t.llm_calls = j.value("llm_calls", std::size_t{0});
    return t;
}

// ---------------------------------------------------------------------------
// data loading

std::vector<kg::EvalCase> load_eval_cases(const std::filesystem::path& test_tsv,
                                          const std::string& direction) {
    std::ifstream in(test_tsv, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open test file " + test_tsv.string());
    std::vector<kg::EvalCase> cases;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty()) continue;
        std::stringstream ss(line);
        std::string h, r, t;
        if (!std::getline(ss, h, '\t') || !std::getline(ss, r, '\t') ||
            !std::getline(ss, t, '\t') || h.empty() || r.empty() || t.empty())
            throw kg::ParseError(lineno, "expected head<TAB>relation<TAB>tail");
        if (direction == "tail" || direction == "both")
            cases.push_back({{kg::Query::Direction::Tail, h, r}, t});
        if (direction == "head" || direction == "both")
            cases.push_back({{kg::Query::Direction::Head, t, r}, h});
    }
    return cases;
}

// ---------------------------------------------------------------------------
// HTTP adapters (live mode; everything offline goes through fixtures)

namespace {

struct UrlParts {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

UrlParts split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw std::runtime_error("bad url: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

std::string http_post_json(const std::string& url, const std::string& body,
                           const std::string& bearer) {
    auto parts = split_url(url);
    httplib::Client cli(parts.origin);
    cli.set_read_timeout(60, 0);
    httplib::Headers headers;
    if (!bearer.empty())
        headers.emplace("Authorization", "Bearer " + bearer);
    auto res = cli.Post(parts.path, headers, body, "application/json");
    if (!res || res->status >= 400)
        throw std::runtime_error("http post failed: " + url +
                                 (res ? " status " + std::to_string(res->status)
                                      : " (no response)"));
    return res->body;
}

std::string http_get(const std::string& url, const std::string& bearer) {
    auto parts = split_url(url);
    httplib::Client cli(parts.origin);
    cli.set_read_timeout(60, 0);
    httplib::Headers headers;
    if (!bearer.empty())
        headers.emplace("Authorization", "Bearer " + bearer);
    auto res = cli.Get(parts.path, headers);
    if (!res || res->status >= 400)
        throw std::runtime_error("http get failed: " + url);
    return res->body;
}

// Provider-agnostic search adapter: GET <base>?q=<query> returning a JSON
// array of {source_id, title, text}.
class HttpSearchClient : public retrieval::SearchClient {
public:
    HttpSearchClient(std::string base_url, std::string api_key)
        : base_url_(std::move(base_url)), api_key_(std::move(api_key)) {}

    std::vector<retrieval::Document> search(const std::string& query) override {
        std::string url = base_url_;
        url += url.find('?') == std::string::npos ? "?q=" : "&q=";
        url += httplib::detail::encode_query_param(query);
        auto body = http_get(url, api_key_);
        return documents_from_json(json::parse(body), retrieval::ToolKind::Basic);
    }

private:
    std::string base_url_;
    std::string api_key_;
};

std::string env_or_empty(const std::string& name) {
    if (name.empty()) return "";
    const char* v = std::getenv(name.c_str());
    return v ? v : "";
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

struct CaseOutcome {
    agent::Trajectory trajectory;
    std::vector<kg::EntityId> entities;
    std::vector<linking::LinkResult> audit;
    bool failed = false;
    std::string error;
};

}  // namespace

// ---------------------------------------------------------------------------
// run_eval

RunReport run_eval(const config::RunConfig& cfg,
                   const std::filesystem::path& out_dir) {
    cfg.validate();
    std::filesystem::create_directories(out_dir);

    kg::IngestStats train_stats;
    kg::KnowledgeGraph train;
    {
        std::ifstream in(cfg.train_path, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot open train file " + cfg.train_path);
        train = kg::load_triples(in, &train_stats);
    }
    auto cases = load_eval_cases(cfg.test_path, cfg.direction);
    kg::Catalog catalog;
    if (!cfg.catalog_path.empty()) {
        std::ifstream in(cfg.catalog_path, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot open catalog " + cfg.catalog_path);
        catalog = kg::load_entity_catalog(in);
    }
    auto table = kg::compute_relation_cardinality(train);
    auto alias_index = linking::build_alias_index(catalog, cfg.fuzzy_threshold);

    std::unique_ptr<cache::ReplayCache> cache;
    if (!cfg.cache_dir.empty())
        cache = std::make_unique<cache::ReplayCache>(cfg.cache_dir);

    // search clients: fixture corpus, live HTTP, or nothing; optionally a
    // network kill-switch, optionally routed through the replay cache
    std::unique_ptr<retrieval::SearchClient> raw_basic, raw_advanced;
    if (cfg.fail_on_network) {
        raw_basic = std::make_unique<FailingSearchClient>();
        raw_advanced = std::make_unique<FailingSearchClient>();
    } else if (!cfg.corpus_path.empty()) {
        raw_basic = std::make_unique<FixtureSearchClient>(
            std::filesystem::path(cfg.corpus_path), retrieval::ToolKind::Basic);
        raw_advanced = std::make_unique<FixtureSearchClient>(
            std::filesystem::path(cfg.corpus_path),
            retrieval::ToolKind::Advanced);
    } else {
        auto key = env_or_empty(cfg.search_api_key_env);
        if (!cfg.basic_url.empty())
            raw_basic = std::make_unique<HttpSearchClient>(cfg.basic_url, "");
        if (!cfg.advanced_url.empty())
            raw_advanced =
                std::make_unique<HttpSearchClient>(cfg.advanced_url, key);
    }
    std::unique_ptr<CachedSearchClient> cached_basic, cached_advanced;
    retrieval::SearchClient* basic = raw_basic.get();
    retrieval::SearchClient* advanced = raw_advanced.get();
    if (cache) {
        if (raw_basic) {
            cached_basic = std::make_unique<CachedSearchClient>(
                *raw_basic, *cache, cache::Kind::BasicSearch);
            basic = cached_basic.get();
        }
        if (raw_advanced) {
            cached_advanced = std::make_unique<CachedSearchClient>(
                *raw_advanced, *cache, cache::Kind::AdvancedSearch);
            advanced = cached_advanced.get();
        }
    }

    // scorer
    retrieval::LexicalScorer lexical(cfg.retriever.stopwords);
    std::unique_ptr<cache::CachedFetch> scorer_fetch;
    std::unique_ptr<retrieval::RemoteScorer> remote_scorer;
    retrieval::RelevanceScorer* scorer = &lexical;
    if (cfg.scorer_mode == "remote") {
        auto url = cfg.scorer_url;
        cache::CachedFetch::Transport transport =
            [url, fail = cfg.fail_on_network](const std::string& body) {
                if (fail)
                    throw std::runtime_error("network disabled: scorer call");
                return http_post_json(url, body, "");
            };
        if (cache) {
            scorer_fetch = std::make_unique<cache::CachedFetch>(
                *cache, cache::Kind::Scorer, transport);
            remote_scorer = std::make_unique<retrieval::RemoteScorer>(
                [&fetch = *scorer_fetch](const std::string& body) {
                    return fetch(body);
                });
        } else {
            remote_scorer = std::make_unique<retrieval::RemoteScorer>(transport);
        }
        scorer = remote_scorer.get();
    }

    // LLM factory
    json script_doc;
    if (cfg.llm_mode == "script") {
        std::ifstream in(cfg.llm_script_path);
        if (!in)
            throw std::runtime_error("cannot open llm script " +
                                     cfg.llm_script_path);
        in >> script_doc;
    }
    std::unique_ptr<cache::CachedFetch> llm_fetch;
    cache::CachedFetch::Transport llm_transport;
    if (cfg.llm_mode == "http") {
        llm_transport = [url = cfg.llm_url, key = env_or_empty(cfg.llm_api_key_env),
                         fail = cfg.fail_on_network](const std::string& body) {
            if (fail) throw std::runtime_error("network disabled: llm call");
            return http_post_json(url, body, key);
        };
        if (cache)
            llm_fetch = std::make_unique<cache::CachedFetch>(
                *cache, cache::Kind::Llm, llm_transport);
    }
    auto make_llm = [&](const std::string& case_id)
        -> std::unique_ptr<llm::LlmClient> {
        if (cfg.llm_mode == "follow")
            return std::make_unique<llm::FollowRetrievalLlm>();
        if (cfg.llm_mode == "script") {
            const json* turns = nullptr;
            if (script_doc.contains(case_id)) turns = &script_doc[case_id];
            else if (script_doc.contains("*")) turns = &script_doc["*"];
            if (!turns)
                throw std::runtime_error("llm script has no turns for " + case_id);
            return std::make_unique<llm::ScriptedLlm>(
                llm::ScriptedLlm::from_json(turns->dump()));
        }
        if (cfg.llm_mode == "http") {
            if (llm_fetch)
                return std::make_unique<llm::HttpLlmClient>(
                    [&fetch = *llm_fetch](const std::string& body) {
                        return fetch(body);
                    },
                    cfg.agent.model_id);
            return std::make_unique<llm::HttpLlmClient>(llm_transport,
                                                        cfg.agent.model_id);
        }
        throw std::runtime_error("unknown llm mode " + cfg.llm_mode);
    };

    // concurrent case execution; aggregation stays in case order
    std::vector<CaseOutcome> outcomes(cases.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= cases.size()) break;
            std::string case_id = "case-" + std::to_string(i);
            CaseOutcome& out = outcomes[i];
            try {
                auto llm_client = make_llm(case_id);
                agent::AgentDeps deps{*llm_client, basic,    advanced,
                                      *scorer,     train,    catalog,
                                      cfg.retriever};
                auto res = agent::run_agent(cases[i], deps, cfg.agent);
                res.trajectory.case_id = case_id;
                out.trajectory = std::move(res.trajectory);
                out.entities =
                    linking::link_ranked(res.candidates, alias_index, &out.audit);
            } catch (const std::exception& e) {
                out.failed = true;
                out.error = e.what();
                out.trajectory.case_id = case_id;
                out.trajectory.eval_case = cases[i];
                out.trajectory.terminated_by = agent::TerminatedBy::FormatBudget;
            }
        }
    };
    {
        std::vector<std::thread> pool;
        std::size_t width = std::max<std::size_t>(1, cfg.concurrency);
        for (std::size_t i = 0; i < width; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // outputs
    std::vector<metrics::RankedPrediction> preds;
    std::vector<agent::Trajectory> trajectories;
    RunReport report;
    {
        std::ofstream traj_out(out_dir / "trajectories.jsonl", std::ios::binary);
        std::ofstream audit_out(out_dir / "linking_audit.tsv", std::ios::binary);
        std::ofstream case_out(out_dir / "per_case.csv", std::ios::binary);
        case_out << "case_id,direction,known_entity,relation,gold,rank,"
                    "n_candidates,n_linked,terminated_by,llm_calls,basic_calls,"
                    "advanced_calls,error\n";
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            auto& o = outcomes[i];
            traj_out << trajectory_to_json(o.trajectory).dump() << '\n';
            for (const auto& a : o.audit) {
                char score_buf[32];
                std::snprintf(score_buf, sizeof score_buf, "%.3f", a.score);
                audit_out << o.trajectory.case_id << '\t' << a.surface << '\t'
                          << (a.entity ? *a.entity : std::string("-")) << '\t'
                          << linking::link_method_name(a.method) << '\t'
                          << score_buf << '\n';
            }
            metrics::RankedPrediction p;
            p.eval_case = cases[i];
            p.entities = o.entities;
            p.trajectory_ref = o.trajectory.case_id;
            auto rank = metrics::rank_of_gold(p);
            const auto& q = cases[i].query;
            case_out << o.trajectory.case_id << ','
                     << (q.direction == kg::Query::Direction::Tail ? "tail"
                                                                   : "head")
                     << ',' << csv_escape(q.known_entity) << ','
                     << csv_escape(q.relation) << ',' << csv_escape(cases[i].gold)
                     << ',' << (rank ? std::to_string(*rank) : "-") << ','
                     << o.trajectory.final_candidates.size() << ','
                     << o.entities.size() << ','
                     << agent::terminated_by_name(o.trajectory.terminated_by)
                     << ',' << o.trajectory.llm_calls << ','
                     << o.trajectory.tools_used.basic << ','
                     << o.trajectory.tools_used.advanced << ','
                     << csv_escape(o.error) << '\n';
            preds.push_back(std::move(p));
            if (o.failed) ++report.failed_cases;
            trajectories.push_back(o.trajectory);
        }
    }
    {
        std::ofstream snap(out_dir / "config_snapshot", std::ios::binary);
        snap << cfg.raw_text;
    }

    metrics::RaHitsOptions ra_opts{cfg.ra_literal_rule};
    report.metric_report = metrics::score(preds, table, cfg.metrics_n, ra_opts);
    report.usage = metrics::retriever_usage(trajectories);
    std::size_t total_calls = 0;
    std::map<std::string, std::size_t> term_hist;
    for (const auto& t : trajectories) {
        total_calls += t.llm_calls;
        ++term_hist[agent::terminated_by_name(t.terminated_by)];
    }
    report.mean_iterations =
        trajectories.empty()
            ? 0.0
            : static_cast<double>(total_calls) /
                  static_cast<double>(trajectories.size());
    report.terminated_by = term_hist;
    if (cache) {
        report.cache_hits = cache->hits();
        report.cache_misses = cache->misses();
    }
    if (cached_basic) report.network_calls += cached_basic->network_calls();
    if (cached_advanced) report.network_calls += cached_advanced->network_calls();
    if (scorer_fetch) report.network_calls += scorer_fetch->network_calls();
    if (llm_fetch) report.network_calls += llm_fetch->network_calls();

    // report.json holds no timestamps and no cache counters, so a warm-cache
    // re-run is byte-identical
    json hits, ra_hits, ra_unsupported;
    for (const auto& [n, v] : report.metric_report.hits)
        hits[std::to_string(n)] = {{"value", v.value}, {"support", v.support}};
    for (const auto& [n, v] : report.metric_report.ra_hits) {
        json entry = {{"support", v.support}, {"defined", v.defined}};
        if (v.defined) entry["value"] = v.value;
        ra_hits[std::to_string(n)] = entry;
    }
    for (const auto& [n, v] : report.metric_report.ra_unsupported)
        ra_unsupported[std::to_string(n)] = v;
    report.report_json = {
        {"case_count", report.metric_report.case_count},
        {"metrics",
         {{"hits", hits},
          {"mrr", report.metric_report.mrr},
          {"ra_hits", ra_hits},
          {"ra_unsupported", ra_unsupported},
          {"ra_rule", cfg.ra_literal_rule ? "literal" : "support-table"}}},
        {"retriever_usage",
         {{"basic_calls", report.usage.basic_calls},
          {"advanced_calls", report.usage.advanced_calls},
          {"no_retrieval_cases", report.usage.no_retrieval_cases},
          {"cases", report.usage.cases}}},
        {"mean_iterations", report.mean_iterations},
        {"terminated_by", term_hist},
        {"failed_cases", report.failed_cases},
        {"train", {{"triples", train.size()},
                   {"duplicates_dropped", train_stats.duplicates}}},
        {"config",
         {{"direction", cfg.direction},
          {"llm_mode", cfg.llm_mode},
          {"scorer_mode", cfg.scorer_mode},
          {"metrics_n", cfg.metrics_n},
          {"model_id", cfg.agent.model_id}}},
    };
    {
        std::ofstream out(out_dir / "report.json", std::ios::binary);
        out << report.report_json.dump(2) << '\n';
    }
    {
        std::ofstream out(out_dir / "report.txt", std::ios::binary);
        out << metrics::render_report(report.metric_report);
        out << "mean_iterations: " << report.mean_iterations << '\n';
        out << "retriever_usage: basic=" << report.usage.basic_calls
            << " advanced=" << report.usage.advanced_calls
            << " no_retrieval=" << report.usage.no_retrieval_cases << '\n';
        for (const auto& [k, v] : term_hist)
            out << "terminated_by[" << k << "]: " << v << '\n';
        out << "cache: hits=" << report.cache_hits
            << " misses=" << report.cache_misses
            << " network_calls=" << report.network_calls << '\n';
        out << "failed_cases: " << report.failed_cases << '\n';
    }
    return report;
}

// ---------------------------------------------------------------------------

builder::Manifest build_emerging(const builder::BuilderConfig& cfg,
                                 builder::WikidataClient& client,
                                 const std::filesystem::path& out_dir) {
    cfg.validate();
    std::filesystem::create_directories(out_dir);
    builder::ProgressStore progress(out_dir / "progress.json");
    auto bundles = builder::fetch_emerging_entities(cfg, client, &progress);
    auto survivors =
        builder::apply_cardinality_filter(bundles, cfg.max_tail_cardinality);
    return builder::emit_benchmark(survivors, bundles, out_dir, cfg);
}

std::string show_trajectory(const std::filesystem::path& run_dir,
                            const std::string& case_id) {
    std::ifstream in(run_dir / "trajectories.jsonl", std::ios::binary);
    if (!in)
        throw std::runtime_error("no trajectories.jsonl under " +
                                 run_dir.string());
    std::vector<std::string> available;
    std::string line;
    while (std::getline(in, line)) {
        if (text::trim(line).empty()) continue;
        auto doc = json::parse(line);
        auto id = doc.value("case_id", "");
        if (id == case_id) {
            auto t = trajectory_from_json(doc);
            std::string out = "case " + id + ": query " +
                              kg::render_query(t.eval_case.query) + " gold " +
                              t.eval_case.gold + "\n";
            out += agent::render_trajectory(t);
            out += '\n';
            return out;
        }
        available.push_back(id);
    }
    std::string msg = "unknown case id " + case_id + "; available:";
    for (const auto& id : available) msg += ' ' + id;
    throw std::runtime_error(msg);
}

metrics::MetricReport score_predictions(const std::filesystem::path& predictions_jsonl,
                                        const std::filesystem::path& train_tsv,
                                        const std::vector<std::size_t>& metrics_n,
                                        bool ra_literal_rule) {
    kg::KnowledgeGraph train;
    {
        std::ifstream in(train_tsv, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot open train file " +
                                     train_tsv.string());
        train = kg::load_triples(in);
    }
    auto table = kg::compute_relation_cardinality(train);
    std::vector<metrics::RankedPrediction> preds;
    std::ifstream in(predictions_jsonl, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open predictions " +
                                 predictions_jsonl.string());
    std::string line;
    while (std::getline(in, line)) {
        if (text::trim(line).empty()) continue;
        auto doc = json::parse(line);
        metrics::RankedPrediction p;
        p.eval_case.query.direction = doc.value("direction", "tail") == "head"
                                          ? kg::Query::Direction::Head
                                          : kg::Query::Direction::Tail;
        p.eval_case.query.known_entity = doc.at("known_entity");
        p.eval_case.query.relation = doc.at("relation");
        p.eval_case.gold = doc.at("gold");
        p.entities = doc.at("entities").get<std::vector<std::string>>();
        p.trajectory_ref = doc.value("case_id", "");
        preds.push_back(std::move(p));
    }
    return metrics::score(preds, table, metrics_n, {ra_literal_rule});
}

}  // namespace agree::runner
