#include "agree/agent.hpp"

#include <chrono>
#include <ctime>
#include <set>
#include <sstream>

#include "agree/prompts.hpp"
#include "agree/text.hpp"

namespace agree::agent {

namespace {

std::string now_iso8601() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string ci_key(const std::string& s) { return text::to_lower_ascii(s); }

std::vector<std::string> dedupe_ci(const std::vector<std::string>& in) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& s : in)
        if (seen.insert(ci_key(s)).second) out.push_back(s);
    return out;
}

std::vector<std::string> split_commas_trimmed(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, ',')) {
        auto t = text::trim(cur);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

std::string digest_chunks(const retrieval::ProcessResult& pr) {
    std::string obs;
    if (pr.chunks.empty()) {
        obs = "[no results]";
    } else {
        std::size_t i = 1;
        for (const auto& c : pr.chunks) {
            if (!obs.empty()) obs += '\n';
            obs += std::to_string(i++) + ". " + c.doc_title + " — " + c.text;
        }
    }
    if (pr.filter_disabled)
        obs += "\n[keyword filter disabled: query has no keywords]";
    if (pr.scorer_failed) obs += "\n[scorer failed; original order kept]";
    return obs;
}

std::string serialize_tool_call(const std::string& name, const std::string& query) {
    return "tool_call: " + name + "\nquery: \"" + query + "\"";
}

}  // namespace

const char* terminated_by_name(TerminatedBy t) {
    switch (t) {
        case TerminatedBy::Answered: return "ANSWERED";
        case TerminatedBy::IterationBudget: return "ITERATION_BUDGET";
        case TerminatedBy::FormatBudget: return "FORMAT_BUDGET";
    }
    return "?";
}

const char* format_reason_name(FormatCheck::Reason r) {
    switch (r) {
        case FormatCheck::Reason::Ok: return "ok";
        case FormatCheck::Reason::NoBlock: return "no answer block";
        case FormatCheck::Reason::MultipleBlocks: return "multiple answer blocks";
        case FormatCheck::Reason::Empty: return "empty answer block";
    }
    return "?";
}

FormatCheck check_answer_format(const std::string& raw) {
    static const std::string open = "<answer>";
    static const std::string close = "</answer>";
    FormatCheck fc;
    auto first_open = raw.find(open);
    if (first_open == std::string::npos) {
        fc.reason = FormatCheck::Reason::NoBlock;
        return fc;
    }
    auto first_close = raw.find(close, first_open + open.size());
    if (first_close == std::string::npos) {
        fc.reason = FormatCheck::Reason::NoBlock;
        return fc;
    }
    if (raw.find(open, first_open + open.size()) != std::string::npos ||
        raw.find(close, first_close + close.size()) != std::string::npos) {
        fc.reason = FormatCheck::Reason::MultipleBlocks;
        return fc;
    }
    auto interior = raw.substr(first_open + open.size(),
                               first_close - first_open - open.size());
    auto members = dedupe_ci(split_commas_trimmed(interior));
    if (members.empty()) {
        fc.reason = FormatCheck::Reason::Empty;
        return fc;
    }
    fc.ok = true;
    fc.reason = FormatCheck::Reason::Ok;
    fc.candidates.surfaces = std::move(members);
    return fc;
}

CandidateList salvage_parse(const std::string& raw) {
    std::string body = raw;
    // drop any tag fragments before splitting
    for (const char* tag : {"<answer>", "</answer>"}) {
        std::size_t pos;
        while ((pos = body.find(tag)) != std::string::npos)
            body.erase(pos, std::string(tag).size());
    }
    return {dedupe_ci(split_commas_trimmed(body))};
}

std::vector<llm::ToolSchema> tool_schemas() {
    return {
        {"search_tool_basic",
         "Search a document retriever (Wikipedia-style) for background "
         "articles. Use this first."},
        {"search_tool_advanced",
         "Search the open web for fresh or obscure information. Escalate "
         "here when the basic tool is not enough."},
    };
}

std::vector<llm::ChatMessage> build_task_prompt(const kg::EvalCase& ec,
                                                const kg::KnowledgeGraph& kg,
                                                const kg::Catalog& catalog,
                                                const AgentConfig& cfg) {
    std::unordered_set<kg::Triple, kg::TripleHash> exclude;
    if (ec.query.direction == kg::Query::Direction::Tail)
        exclude.insert({ec.query.known_entity, ec.query.relation, ec.gold});
    else
        exclude.insert({ec.gold, ec.query.relation, ec.query.known_entity});

    auto relation_examples = kg::examples_for_relation(
        kg, ec.query.relation, cfg.relation_example_count, exclude);
    auto entity_triples =
        kg::neighborhood(kg, ec.query.known_entity, cfg.neighborhood_limit);
    // the gold fact must not leak through the neighborhood either
    std::erase_if(entity_triples,
                  [&](const kg::Triple& t) { return exclude.count(t) > 0; });

    std::string label, description;
    if (auto it = catalog.find(ec.query.known_entity); it != catalog.end()) {
        label = it->second.label;
        description = it->second.description;
    }
    std::string system = prompts::render_task_instruct(
        ec.query, label, description, relation_examples, entity_triples);
    return {
        {llm::Role::System, std::move(system)},
        {llm::Role::User,
         "Complete the query " + kg::render_query(ec.query) +
             ". Decide whether you need the tools or can answer directly."},
    };
}

llm::ChatMessage build_answer_prompt(const kg::EvalCase&,
                                     const std::vector<std::string>& relation_endings) {
    return {llm::Role::User, prompts::render_answer_generation(relation_endings)};
}

AgentAction decide_next(const std::vector<llm::ChatMessage>& transcript,
                        llm::LlmClient& llm) {
    auto turn = llm.complete(transcript, tool_schemas());
    AgentAction act;
    if (turn.is_tool_call) {
        try {
            act.tool = retrieval::tool_from_name(turn.tool_name);
        } catch (const std::exception&) {
            act.kind = AgentAction::Kind::Reflect;
            act.text = serialize_tool_call(turn.tool_name, turn.tool_query);
            act.sufficient = false;
            return act;
        }
        act.query = text::trim(turn.tool_query);
        if (act.query.empty()) {
            act.kind = AgentAction::Kind::Reflect;
            act.text = serialize_tool_call(turn.tool_name, turn.tool_query);
            act.sufficient = false;
            return act;
        }
        act.kind = AgentAction::Kind::ToolCall;
        return act;
    }
    if (turn.text.find("<answer>") != std::string::npos) {
        act.kind = AgentAction::Kind::Answer;
        act.text = turn.text;
        return act;
    }
    act.kind = AgentAction::Kind::Reflect;
    act.text = turn.text;
    act.sufficient = false;
    std::stringstream ss(turn.text);
    std::string line;
    while (std::getline(ss, line)) {
        auto t = text::trim(line);
        if (t == "DECISION: SUFFICIENT") act.sufficient = true;
        else if (t == "DECISION: CONTINUE") act.sufficient = false;
    }
    return act;
}

AgentResult run_agent(const kg::EvalCase& ec, AgentDeps& deps,
                      const AgentConfig& cfg) {
    Trajectory traj;
    traj.eval_case = ec;
    auto transcript = build_task_prompt(ec, deps.kg, deps.catalog, cfg);

    std::vector<retrieval::Chunk> evidence;
    bool sufficient = false;
    std::optional<std::string> direct_answer;
    std::size_t iter_calls = 0;

    while (iter_calls < cfg.max_iterations) {
        AgentAction act = decide_next(transcript, deps.llm);
        ++iter_calls;
        ++traj.llm_calls;
        if (act.kind == AgentAction::Kind::Answer) {
            direct_answer = act.text;
            break;  // recorded below as the first answer attempt
        }
        StepRecord step;
        step.index = traj.steps.size();
        step.action = act;
        step.timestamp = now_iso8601();
        if (act.kind == AgentAction::Kind::ToolCall) {
            if (act.tool == retrieval::ToolKind::Basic)
                ++traj.tools_used.basic;
            else
                ++traj.tools_used.advanced;
            transcript.push_back(
                {llm::Role::Assistant,
                 serialize_tool_call(retrieval::tool_name(act.tool), act.query)});
            std::string obs;
            try {
                auto* client = act.tool == retrieval::ToolKind::Basic
                                   ? deps.basic
                                   : deps.advanced;
                if (!client)
                    throw std::runtime_error(
                        std::string(retrieval::tool_name(act.tool)) +
                        " is not configured");
                auto docs = retrieval::search(act.tool, act.query, *client,
                                              deps.retriever);
                auto pr = retrieval::process(docs, act.query, deps.scorer,
                                             deps.retriever);
                obs = digest_chunks(pr);
                if (cfg.accumulate_evidence)
                    evidence.insert(evidence.end(), pr.chunks.begin(),
                                    pr.chunks.end());
            } catch (const std::exception& e) {
                obs = std::string("tool failed: ") + e.what();
            }
            step.observation = obs;
            transcript.push_back({llm::Role::Tool, obs});
        } else {
            transcript.push_back({llm::Role::Assistant, act.text});
        }
        traj.steps.push_back(std::move(step));
        if (act.kind == AgentAction::Kind::Reflect && act.sufficient) {
            sufficient = true;
            break;
        }
    }
    const bool iteration_exhausted = !sufficient && !direct_answer;

    // answer-generation loop
    std::vector<std::string> endings;
    {
        std::unordered_set<kg::Triple, kg::TripleHash> exclude;
        if (ec.query.direction == kg::Query::Direction::Tail)
            exclude.insert({ec.query.known_entity, ec.query.relation, ec.gold});
        else
            exclude.insert({ec.gold, ec.query.relation, ec.query.known_entity});
        for (const auto& t : kg::examples_for_relation(
                 deps.kg, ec.query.relation, cfg.relation_example_count, exclude))
            endings.push_back(ec.query.direction == kg::Query::Direction::Tail
                                  ? t.tail
                                  : t.head);
    }

    bool answered = false;
    bool answer_prompt_sent = false;
    std::string last_raw;
    std::size_t attempts = 0;
    while (attempts < cfg.max_gen_attempts) {
        std::string raw;
        if (direct_answer && attempts == 0) {
            raw = *direct_answer;
        } else {
            if (!answer_prompt_sent) {
                transcript.push_back(build_answer_prompt(ec, endings));
                answer_prompt_sent = true;
            }
            auto turn = deps.llm.complete(transcript, {});
            ++traj.llm_calls;
            raw = turn.is_tool_call
                      ? serialize_tool_call(turn.tool_name, turn.tool_query)
                      : turn.text;
        }
        ++attempts;
        last_raw = raw;
        auto fc = check_answer_format(raw);

        StepRecord step;
        step.index = traj.steps.size();
        step.action.kind = AgentAction::Kind::Answer;
        step.action.text = raw;
        step.observation = fc.ok ? "format ok"
                                 : std::string("format error: ") +
                                       format_reason_name(fc.reason);
        step.timestamp = now_iso8601();
        traj.steps.push_back(std::move(step));
        transcript.push_back({llm::Role::Assistant, raw});

        if (fc.ok) {
            traj.final_candidates = fc.candidates.surfaces;
            answered = true;
            break;
        }
        transcript.push_back(
            {llm::Role::User,
             std::string("Format error: ") + format_reason_name(fc.reason) +
                 ". STRICTLY use this format only: "
                 "<answer>ANSWER_1, ANSWER_2, ...</answer>"});
    }

    if (answered) {
        traj.terminated_by = TerminatedBy::Answered;
    } else {
        traj.final_candidates = salvage_parse(last_raw).surfaces;
        traj.salvaged = true;
        traj.terminated_by = iteration_exhausted ? TerminatedBy::IterationBudget
                                                 : TerminatedBy::FormatBudget;
    }
    return {traj, CandidateList{traj.final_candidates}};
}

std::string render_step(const StepRecord& step) {
    std::string out = "Step " + std::to_string(step.index) + ": ";
    switch (step.action.kind) {
        case AgentAction::Kind::ToolCall:
            out += "tool_call: " + std::string(retrieval::tool_name(step.action.tool));
            out += "\n    query: \"" + step.action.query + "\"";
            break;
        case AgentAction::Kind::Reflect:
            out += "Self-Reflection: " + step.action.text;
            break;
        case AgentAction::Kind::Answer:
            out += "Answer-Generation: " + step.action.text;
            break;
    }
    if (!step.observation.empty()) {
        std::string indented;
        std::stringstream ss(step.observation);
        std::string line;
        while (std::getline(ss, line)) indented += "\n    | " + line;
        out += indented;
    }
    return out;
}

std::string render_trajectory(const Trajectory& t) {
    std::string out;
    for (const auto& s : t.steps) {
        if (!out.empty()) out += '\n';
        out += render_step(s);
    }
    if (!out.empty()) out += '\n';
    out += "terminated_by: " + std::string(terminated_by_name(t.terminated_by));
    if (t.salvaged) out += " (salvaged)";
    return out;
}

}  // namespace agree::agent
