#include "agree/retrieval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace agree::retrieval {

const char* tool_name(ToolKind k) {
    return k == ToolKind::Basic ? "search_tool_basic" : "search_tool_advanced";
}

ToolKind tool_from_name(const std::string& name) {
    auto lowered = text::to_lower_ascii(name);
    if (lowered.find("advanced") != std::string::npos) return ToolKind::Advanced;
    if (lowered.find("basic") != std::string::npos) return ToolKind::Basic;
    throw std::invalid_argument("unknown tool name: " + name);
}

std::vector<Document> search(ToolKind tool, const std::string& query,
                             SearchClient& client, const RetrieverConfig& cfg) {
    std::string trimmed = text::trim(query);
    if (trimmed.empty())
        throw std::invalid_argument("search: query must be non-empty");
    auto docs = client.search(trimmed);
    if (docs.size() > cfg.max_documents_per_call)
        docs.resize(cfg.max_documents_per_call);
    for (auto& d : docs) d.tool = tool;
    return docs;
}

namespace {

bool is_abbreviation(const std::string& token) {
    static const std::set<std::string> abbrevs = {
        "mr",  "mrs", "ms",  "dr",   "prof", "sr",  "jr",  "st",   "mt",
        "no",  "vs",  "etc", "jan",  "feb",  "mar", "apr", "jun",  "jul",
        "aug", "sep", "sept", "oct", "nov",  "dec", "fig", "inc",  "ltd",
        "co",  "corp", "dept", "univ", "est", "al",  "approx", "u.s", "u.k"};
    return abbrevs.count(text::to_lower_ascii(token)) > 0;
}

// The run of word characters (letters/digits/periods inside acronyms)
// immediately before position i.
std::string token_before(const std::string& s, std::size_t i) {
    std::size_t end = i;
    std::size_t start = end;
    while (start > 0) {
        unsigned char c = static_cast<unsigned char>(s[start - 1]);
        if (std::isalnum(c) || c == '.' || c >= 0x80)
            --start;
        else
            break;
    }
    std::string tok = s.substr(start, end - start);
    while (!tok.empty() && tok.back() == '.') tok.pop_back();
    return tok;
}

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c) != 0;
    });
}

bool single_letter(const std::string& s) {
    return s.size() == 1 && std::isalpha(static_cast<unsigned char>(s[0]));
}

bool opens_sentence(unsigned char c) {
    return std::isupper(c) || std::isdigit(c) || c == '"' || c == '\'' ||
           c == '(' || c == '[' || c == 0xE2;  // UTF-8 lead of curly quotes
}

}  // namespace

std::vector<std::string> segment_sentences(const std::string& textbody) {
    std::vector<std::string> sentences;
    const std::string& s = textbody;
    std::size_t start = 0;
    auto flush = [&](std::size_t end) {
        std::string sent = text::trim(s.substr(start, end - start));
        if (!sent.empty()) sentences.push_back(std::move(sent));
        start = end;
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c != '.' && c != '!' && c != '?') continue;
        // absorb closing quotes/brackets after the terminator
        std::size_t j = i + 1;
        while (j < s.size() && (s[j] == '"' || s[j] == '\'' || s[j] == ')'))
            ++j;
        // require whitespace, then a sentence opener
        if (j >= s.size()) {
            flush(s.size());
            break;
        }
        if (!std::isspace(static_cast<unsigned char>(s[j]))) continue;
        std::size_t k = j;
        while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k])))
            ++k;
        if (k >= s.size()) {
            flush(s.size());
            break;
        }
        if (!opens_sentence(static_cast<unsigned char>(s[k]))) continue;
        if (c == '.') {
            std::string tok = token_before(s, i);
            auto last_seg = tok;
            if (auto dot = tok.rfind('.'); dot != std::string::npos)
                last_seg = tok.substr(dot + 1);
            if (is_abbreviation(tok) || is_abbreviation(last_seg) ||
                single_letter(last_seg) || all_digits(last_seg))
                continue;
        }
        flush(j);
        i = j - 1;
    }
    if (start < s.size()) flush(s.size());
    return sentences;
}

std::vector<Chunk> chunk_document(const Document& doc) {
    auto sentences = segment_sentences(doc.text);
    std::vector<Chunk> chunks;
    for (std::size_t i = 0; i < sentences.size(); i += 3) {
        Chunk c;
        c.doc_source_id = doc.source_id;
        c.doc_title = doc.title;
        c.sentence_start = i;
        for (std::size_t j = i; j < std::min(i + 3, sentences.size()); ++j) {
            if (!c.text.empty()) c.text += ' ';
            c.text += sentences[j];
            c.sentences.push_back(sentences[j]);
        }
        chunks.push_back(std::move(c));
    }
    return chunks;
}

FilterResult filter_chunks(std::vector<Chunk> chunks, const std::string& query,
                           const RetrieverConfig& cfg) {
    auto query_kw = text::keyword_set(query, cfg.stopwords);
    if (query_kw.empty()) return {std::move(chunks), true};
    FilterResult out;
    for (auto& c : chunks) {
        auto chunk_kw = text::keyword_set(c.text, cfg.stopwords);
        bool shared = std::any_of(query_kw.begin(), query_kw.end(),
                                  [&](const std::string& k) {
                                      return chunk_kw.count(k) > 0;
                                  });
        if (shared) out.chunks.push_back(std::move(c));
    }
    return out;
}

RerankResult rerank(std::vector<Chunk> chunks, const std::string& query,
                    RelevanceScorer& scorer, const RetrieverConfig& cfg) {
    RerankResult out;
    std::vector<std::string> passages;
    passages.reserve(chunks.size());
    for (const auto& c : chunks) passages.push_back(c.text);
    std::vector<double> scores;
    try {
        scores = scorer.score(query, passages);
        if (scores.size() != chunks.size())
            throw std::runtime_error("scorer returned wrong count");
    } catch (const std::exception&) {
        out.scorer_failed = true;
        scores.assign(chunks.size(), 0.0);
        out.chunks = std::move(chunks);
        if (out.chunks.size() > cfg.top_k_chunks)
            out.chunks.resize(cfg.top_k_chunks);
        for (auto& c : out.chunks) c.score = 0.0;
        return out;
    }
    for (std::size_t i = 0; i < chunks.size(); ++i) chunks[i].score = scores[i];
    std::vector<std::size_t> order(chunks.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return chunks[a].score > chunks[b].score;
    });
    for (auto idx : order) {
        out.chunks.push_back(std::move(chunks[idx]));
        if (out.chunks.size() == cfg.top_k_chunks) break;
    }
    return out;
}

ProcessResult process(const std::vector<Document>& documents,
                      const std::string& query, RelevanceScorer& scorer,
                      const RetrieverConfig& cfg) {
    std::vector<Chunk> all;
    for (const auto& d : documents) {
        auto cs = chunk_document(d);
        all.insert(all.end(), std::make_move_iterator(cs.begin()),
                   std::make_move_iterator(cs.end()));
    }
    auto filtered = filter_chunks(std::move(all), query, cfg);
    auto reranked = rerank(std::move(filtered.chunks), query, scorer, cfg);
    return {std::move(reranked.chunks), filtered.filter_disabled,
            reranked.scorer_failed};
}

std::vector<double> LexicalScorer::score(const std::string& query,
                                         const std::vector<std::string>& passages) {
    auto query_kw = text::keyword_set(query, stopwords_);
    std::vector<double> out;
    out.reserve(passages.size());
    for (const auto& p : passages) {
        std::map<std::string, int> tf;
        for (auto& tok : text::tokenize(p)) ++tf[tok];
        double s = 0.0;
        for (const auto& k : query_kw) {
            auto it = tf.find(k);
            if (it != tf.end()) s += std::log(1.0 + it->second);
        }
        out.push_back(s);
    }
    return out;
}

std::vector<double> RemoteScorer::score(const std::string& query,
                                        const std::vector<std::string>& passages) {
    nlohmann::json body = {{"query", query}, {"passages", passages}};
    auto reply = nlohmann::json::parse(post_(body.dump()));
    auto scores = reply.at("scores").get<std::vector<double>>();
    if (scores.size() != passages.size())
        throw std::runtime_error("remote scorer: score count mismatch");
    return scores;
}

}  // namespace agree::retrieval
