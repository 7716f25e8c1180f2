#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agree/kg.hpp"
#include "agree/llm.hpp"
#include "agree/retrieval.hpp"

// The iterative completion loop: direct-answer shortcut, tool selection,
// self-reflection, answer synthesis with format-check retries.
namespace agree::agent {

struct AgentConfig {
    std::size_t max_iterations = 20;
    std::size_t max_gen_attempts = 3;
    std::size_t neighborhood_limit = 10;
    std::size_t relation_example_count = 5;
    bool accumulate_evidence = true;  // keep re-ranked survivors across iterations
    std::string model_id;
};

struct AgentAction {
    enum class Kind { ToolCall, Reflect, Answer };
    Kind kind = Kind::Reflect;
    retrieval::ToolKind tool = retrieval::ToolKind::Basic;  // ToolCall
    std::string query;                                      // ToolCall
    std::string text;       // Reflect / Answer raw text
    bool sufficient = false;  // Reflect
};

struct StepRecord {
    std::size_t index = 0;
    AgentAction action;
    std::string observation;  // chunk digest or format-check verdict
    std::string timestamp;    // wall clock; excluded from canonical renders
};

enum class TerminatedBy { Answered, IterationBudget, FormatBudget };
const char* terminated_by_name(TerminatedBy t);

struct ToolUsage {
    std::size_t basic = 0;
    std::size_t advanced = 0;
    std::size_t total() const { return basic + advanced; }
};

struct Trajectory {
    std::string case_id;
    kg::EvalCase eval_case;
    std::vector<StepRecord> steps;
    ToolUsage tools_used;
    std::vector<std::string> final_candidates;
    TerminatedBy terminated_by = TerminatedBy::FormatBudget;
    bool salvaged = false;  // candidates came from the salvage parse
    std::size_t llm_calls = 0;
};

struct CandidateList {
    std::vector<std::string> surfaces;  // trimmed, case-insensitively unique
};

struct FormatCheck {
    enum class Reason { Ok, NoBlock, MultipleBlocks, Empty };
    bool ok = false;
    Reason reason = Reason::NoBlock;
    CandidateList candidates;
};
const char* format_reason_name(FormatCheck::Reason r);

// Accepts iff raw contains exactly one <answer>...</answer> block with at
// least one non-empty comma-separated member after de-duplication.
FormatCheck check_answer_format(const std::string& raw);

// Best-effort comma split of a rejected answer attempt.
CandidateList salvage_parse(const std::string& raw);

// Task-instruct system message plus the query turn.
std::vector<llm::ChatMessage> build_task_prompt(const kg::EvalCase& ec,
                                                const kg::KnowledgeGraph& kg,
                                                const kg::Catalog& catalog,
                                                const AgentConfig& cfg);

// Answer-generation instruction with format examples drawn from training
// triples of the same relation.
llm::ChatMessage build_answer_prompt(const kg::EvalCase& ec,
                                     const std::vector<std::string>& relation_endings);

// Parse one LLM turn into exactly one action; unparseable turns become
// Reflect(sufficient=false) with the raw text.
AgentAction decide_next(const std::vector<llm::ChatMessage>& transcript,
                        llm::LlmClient& llm);

std::vector<llm::ToolSchema> tool_schemas();

struct AgentDeps {
    llm::LlmClient& llm;
    retrieval::SearchClient* basic = nullptr;
    retrieval::SearchClient* advanced = nullptr;
    retrieval::RelevanceScorer& scorer;
    const kg::KnowledgeGraph& kg;
    const kg::Catalog& catalog;
    retrieval::RetrieverConfig retriever;
};

struct AgentResult {
    Trajectory trajectory;
    CandidateList candidates;
};

AgentResult run_agent(const kg::EvalCase& ec, AgentDeps& deps,
                      const AgentConfig& cfg);

// Canonical renderings (timestamps excluded) used by logs and fixtures.
std::string render_step(const StepRecord& step);
std::string render_trajectory(const Trajectory& t);

}  // namespace agree::agent
