#pragma once

#include <chrono>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "agree/text.hpp"

// The two retriever tools behind one client contract, plus the
// chunk -> keyword-filter -> re-rank post-processing pipeline.
namespace agree::retrieval {

enum class ToolKind { Basic, Advanced };

const char* tool_name(ToolKind k);        // "search_tool_basic" / "search_tool_advanced"
ToolKind tool_from_name(const std::string& name);  // throws on unknown

struct Document {
    std::string source_id;  // URL or page id
    std::string title;
    std::string text;
    ToolKind tool = ToolKind::Basic;
};

struct Chunk {
    std::string doc_source_id;
    std::string doc_title;
    std::size_t sentence_start = 0;  // 0-based into the document's sentences
    std::vector<std::string> sentences;  // 1..3
    std::string text;                    // join of sentences
    double score = 0.0;
};

struct RetrieverConfig {
    std::size_t top_k_chunks = 8;
    std::set<std::string> stopwords = text::default_stopwords();
    std::size_t max_documents_per_call = 5;
    std::chrono::milliseconds timeout{10000};
};

class SearchClient {
public:
    virtual ~SearchClient() = default;
    // Transport failures throw; an empty result set is a normal outcome.
    virtual std::vector<Document> search(const std::string& query) = 0;
};

class RelevanceScorer {
public:
    virtual ~RelevanceScorer() = default;
    // One score per passage, same order.
    virtual std::vector<double> score(const std::string& query,
                                      const std::vector<std::string>& passages) = 0;
};

// Deterministic offline default: sum over shared keywords of
// log(1 + chunk term frequency), computed per chunk only.
class LexicalScorer : public RelevanceScorer {
public:
    explicit LexicalScorer(std::set<std::string> stopwords = text::default_stopwords())
        : stopwords_(std::move(stopwords)) {}
    std::vector<double> score(const std::string& query,
                              const std::vector<std::string>& passages) override;

private:
    std::set<std::string> stopwords_;
};

// Client for a hosted cross-encoder speaking the JSON contract
// {"query", "passages"} -> {"scores"}; the POST transport is injected so it
// can be routed through the replay cache.
class RemoteScorer : public RelevanceScorer {
public:
    using PostFn = std::function<std::string(const std::string& json_body)>;
    explicit RemoteScorer(PostFn post) : post_(std::move(post)) {}
    std::vector<double> score(const std::string& query,
                              const std::vector<std::string>& passages) override;

private:
    PostFn post_;
};

// Validates and trims the query, caps the result at max_documents_per_call,
// and tags every document with the issuing tool.
std::vector<Document> search(ToolKind tool, const std::string& query,
                             SearchClient& client, const RetrieverConfig& cfg);

// Rule-based splitter with a fixed abbreviation list; boundaries at [.?!]
// followed by whitespace and an uppercase letter, opening quote, or digit.
std::vector<std::string> segment_sentences(const std::string& textbody);

// Consecutive groups of 3 sentences; only the final group may be shorter.
std::vector<Chunk> chunk_document(const Document& doc);

struct FilterResult {
    std::vector<Chunk> chunks;
    bool filter_disabled = false;  // query had zero keywords; input passed through
};

// Keep chunks sharing >= 1 keyword with the query, order preserved.
FilterResult filter_chunks(std::vector<Chunk> chunks, const std::string& query,
                           const RetrieverConfig& cfg);

struct RerankResult {
    std::vector<Chunk> chunks;
    bool scorer_failed = false;  // fell back to original order, scores 0
};

// Stable sort by score descending, truncated to top_k_chunks.
RerankResult rerank(std::vector<Chunk> chunks, const std::string& query,
                    RelevanceScorer& scorer, const RetrieverConfig& cfg);

struct ProcessResult {
    std::vector<Chunk> chunks;
    bool filter_disabled = false;
    bool scorer_failed = false;
};

// chunk -> filter -> rerank over all documents, in order.
ProcessResult process(const std::vector<Document>& documents,
                      const std::string& query, RelevanceScorer& scorer,
                      const RetrieverConfig& cfg);

}  // namespace agree::retrieval
