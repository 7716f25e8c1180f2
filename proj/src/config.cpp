#include "agree/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "agree/text.hpp"

namespace agree::config {

namespace {

std::size_t to_size(const std::string& v, const std::string& key) {
    try {
        long n = std::stol(v);
        if (n < 0) throw std::out_of_range("negative");
        return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
        throw std::runtime_error("config: bad integer for " + key + ": " + v);
    }
}

bool to_bool(const std::string& v, const std::string& key) {
    auto l = text::to_lower_ascii(v);
    if (l == "true" || l == "1" || l == "yes") return true;
    if (l == "false" || l == "0" || l == "no") return false;
    throw std::runtime_error("config: bad boolean for " + key + ": " + v);
}

}  // namespace

void RunConfig::validate() const {
    if (concurrency < 1)
        throw std::runtime_error("config: concurrency must be >= 1");
    if (agent.max_iterations < 1 || agent.max_gen_attempts < 1)
        throw std::runtime_error("config: agent budgets must be >= 1");
    if (metrics_n.empty())
        throw std::runtime_error("config: metrics_n must be non-empty");
    for (std::size_t i = 0; i < metrics_n.size(); ++i) {
        if (metrics_n[i] < 1)
            throw std::runtime_error("config: metrics_n entries must be >= 1");
        if (i > 0 && metrics_n[i] <= metrics_n[i - 1])
            throw std::runtime_error(
                "config: metrics_n must be sorted ascending and unique");
    }
    if (direction != "tail" && direction != "head" && direction != "both")
        throw std::runtime_error("config: direction must be tail, head or both");
}

RunConfig parse_run_config_text(const std::string& content) {
    RunConfig cfg;
    cfg.raw_text = content;
    std::istringstream in(content);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto t = text::trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = t.substr(1, t.size() - 2);
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        auto key = text::trim(t.substr(0, eq));
        auto value = text::trim(t.substr(eq + 1));
        auto full = section + "." + key;

        if (full == "data.train") cfg.train_path = value;
        else if (full == "data.test") cfg.test_path = value;
        else if (full == "data.catalog") cfg.catalog_path = value;
        else if (full == "data.direction") cfg.direction = value;
        else if (full == "agent.max_iterations")
            cfg.agent.max_iterations = to_size(value, full);
        else if (full == "agent.max_gen_attempts")
            cfg.agent.max_gen_attempts = to_size(value, full);
        else if (full == "agent.neighborhood_limit")
            cfg.agent.neighborhood_limit = to_size(value, full);
        else if (full == "agent.relation_example_count")
            cfg.agent.relation_example_count = to_size(value, full);
        else if (full == "agent.accumulate_evidence")
            cfg.agent.accumulate_evidence = to_bool(value, full);
        else if (full == "agent.model_id") cfg.agent.model_id = value;
        else if (full == "retriever.top_k_chunks")
            cfg.retriever.top_k_chunks = to_size(value, full);
        else if (full == "retriever.max_documents_per_call")
            cfg.retriever.max_documents_per_call = to_size(value, full);
        else if (full == "retriever.corpus") cfg.corpus_path = value;
        else if (full == "retriever.basic_url") cfg.basic_url = value;
        else if (full == "retriever.advanced_url") cfg.advanced_url = value;
        else if (full == "retriever.search_api_key_env")
            cfg.search_api_key_env = value;
        else if (full == "llm.mode") cfg.llm_mode = value;
        else if (full == "llm.script") cfg.llm_script_path = value;
        else if (full == "llm.url") cfg.llm_url = value;
        else if (full == "llm.api_key_env") cfg.llm_api_key_env = value;
        else if (full == "scorer.mode") cfg.scorer_mode = value;
        else if (full == "scorer.url") cfg.scorer_url = value;
        else if (full == "linking.fuzzy_threshold")
            cfg.fuzzy_threshold = std::stod(value);
        else if (full == "run.concurrency")
            cfg.concurrency = to_size(value, full);
        else if (full == "run.cache_dir") cfg.cache_dir = value;
        else if (full == "run.seed") cfg.seed = std::stol(value);
        else if (full == "run.ra_literal_rule")
            cfg.ra_literal_rule = to_bool(value, full);
        else if (full == "run.fail_on_network")
            cfg.fail_on_network = to_bool(value, full);
        else if (full == "run.metrics_n") {
            cfg.metrics_n.clear();
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ','))
                cfg.metrics_n.push_back(to_size(text::trim(item), full));
        } else {
            throw std::runtime_error("config: unknown key " + full);
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig parse_run_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("config: cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_run_config_text(buf.str());
}

}  // namespace agree::config
