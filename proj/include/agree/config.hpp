#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "agree/agent.hpp"
#include "agree/retrieval.hpp"

// Declarative run configuration: flat key/value with [sections], environment
// variables only for secrets.
namespace agree::config {

struct RunConfig {
    // [data]
    std::string train_path;
    std::string test_path;
    std::string catalog_path;
    std::string direction = "tail";  // tail | head | both

    // [agent]
    agent::AgentConfig agent;

    // [retriever]
    retrieval::RetrieverConfig retriever;
    std::string corpus_path;  // offline fixture corpus (JSON)
    std::string basic_url;
    std::string advanced_url;
    std::string search_api_key_env;

    // [llm]
    std::string llm_mode = "follow";  // follow | script | http
    std::string llm_script_path;
    std::string llm_url;
    std::string llm_api_key_env;

    // [scorer]
    std::string scorer_mode = "lexical";  // lexical | remote
    std::string scorer_url;

    // [linking]
    double fuzzy_threshold = 0.5;

    // [run]
    std::size_t concurrency = 1;
    std::string cache_dir;
    long seed = 0;
    std::vector<std::size_t> metrics_n = {1, 3, 5, 10};
    bool ra_literal_rule = false;
    bool fail_on_network = false;  // replay-closure guard: real calls throw

    std::string raw_text;  // verbatim config file, for the run snapshot

    void validate() const;
};

// INI-style: [section] headers, key = value lines, '#' comments.
RunConfig parse_run_config(const std::filesystem::path& path);
RunConfig parse_run_config_text(const std::string& content);

}  // namespace agree::config
