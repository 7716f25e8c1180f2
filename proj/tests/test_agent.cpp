#include <doctest.h>

#include <sstream>

#include "agree/agent.hpp"
#include "agree/runner.hpp"

using namespace agree;
using nlohmann::json;

namespace {

kg::KnowledgeGraph graph_from(const std::string& tsv) {
    std::istringstream in(tsv);
    return kg::load_triples(in);
}

struct EpisodeHarness {
    kg::KnowledgeGraph train;
    kg::Catalog catalog;
    retrieval::LexicalScorer scorer;
    runner::FixtureSearchClient basic;
    runner::FixtureSearchClient advanced;

    explicit EpisodeHarness(const json& corpus,
                            const std::string& train_tsv = "H\trel\tT\n")
        : train(graph_from(train_tsv)),
          basic(corpus, retrieval::ToolKind::Basic),
          advanced(corpus, retrieval::ToolKind::Advanced) {}

    agent::AgentResult run(llm::LlmClient& llm, const kg::EvalCase& ec,
                           agent::AgentConfig cfg = {}) {
        agent::AgentDeps deps{llm,   &basic,  &advanced, scorer,
                              train, catalog, {}};
        return agent::run_agent(ec, deps, cfg);
    }
};

}  // namespace

TEST_CASE("check_answer_format over 20 fixture strings") {
    using R = agent::FormatCheck::Reason;
    struct Fixture {
        std::string raw;
        bool ok;
        R reason;
        std::vector<std::string> members;
    };
    const std::vector<Fixture> fixtures = {
        {"<answer>A</answer>", true, R::Ok, {"A"}},
        {"<answer>A, B</answer>", true, R::Ok, {"A", "B"}},
        {"text before <answer>A</answer> after", true, R::Ok, {"A"}},
        {"no tags at all", false, R::NoBlock, {}},
        {"<answer>A", false, R::NoBlock, {}},
        {"</answer>A<answer>", false, R::NoBlock, {}},
        {"<answer>A</answer><answer>B</answer>", false, R::MultipleBlocks, {}},
        {"<answer>A</answer> trailing </answer>", false, R::MultipleBlocks, {}},
        {"<answer></answer>", false, R::Empty, {}},
        {"<answer> , ,, </answer>", false, R::Empty, {}},
        {"<answer>A, a</answer>", true, R::Ok, {"A"}},
        {"<answer> A , B </answer>", true, R::Ok, {"A", "B"}},
        {"<answer>A, B, A</answer>", true, R::Ok, {"A", "B"}},
        {"<ANSWER>A</ANSWER>", false, R::NoBlock, {}},
        {"<answer>Baqubah, Diyala Province, Iraq</answer>",
         true,
         R::Ok,
         {"Baqubah", "Diyala Province", "Iraq"}},
        {"<answer>A\nB</answer>", true, R::Ok, {"A\nB"}},
        {"answer: A, B", false, R::NoBlock, {}},
        {"<answer>José, Köln</answer>", true, R::Ok, {"José", "Köln"}},
        {"<answer>A,</answer>", true, R::Ok, {"A"}},
        {"<answer><answer>A</answer>", false, R::MultipleBlocks, {}},
    };
    REQUIRE(fixtures.size() == 20);
    for (const auto& f : fixtures) {
        CAPTURE(f.raw);
        auto fc = agent::check_answer_format(f.raw);
        CHECK(fc.ok == f.ok);
        CHECK(fc.reason == f.reason);
        if (f.ok) CHECK(fc.candidates.surfaces == f.members);
    }
}

TEST_CASE("salvage_parse strips tags and splits") {
    auto c = agent::salvage_parse("Maybe <answer>A, B</answer> or C");
    REQUIRE(c.surfaces.size() == 2);
    CHECK(c.surfaces[0] == "Maybe A");
    CHECK(c.surfaces[1] == "B or C");
    CHECK(agent::salvage_parse("").surfaces.empty());
}

TEST_CASE("build_task_prompt excludes the gold triple everywhere") {
    auto g = graph_from(
        "E\trel\tGOLD\n"
        "A\trel\tX\n"
        "E\tother\tY\n");
    kg::EvalCase ec{{kg::Query::Direction::Tail, "E", "rel"}, "GOLD"};
    auto msgs = agent::build_task_prompt(ec, g, {}, {});
    REQUIRE(msgs.size() == 2);
    const auto& sys = msgs[0].content;
    CHECK(sys.find("(E, rel, GOLD)") == std::string::npos);
    CHECK(sys.find("(A, rel, X)") != std::string::npos);
    CHECK(sys.find("(E, other, Y)") != std::string::npos);
    CHECK(sys.find("Query: (E, rel, ?) - predict the tail entity.") !=
          std::string::npos);
    CHECK(msgs[1].content.find("(E, rel, ?)") != std::string::npos);
}

TEST_CASE("build_task_prompt uses catalog label and description") {
    auto g = graph_from("E\trel\tX\n");
    kg::Catalog cat;
    cat["E"] = {"E", "Entity Label", {"Entity Label"}, "a test entity"};
    kg::EvalCase ec{{kg::Query::Direction::Tail, "E", "rel"}, "Z"};
    auto msgs = agent::build_task_prompt(ec, g, cat, {});
    CHECK(msgs[0].content.find("Entity Label") != std::string::npos);
    CHECK(msgs[0].content.find("a test entity") != std::string::npos);
}

TEST_CASE("decide_next classifies turns") {
    auto probe = [](const std::string& turns_json) {
        auto llm = llm::ScriptedLlm::from_json(turns_json);
        return agent::decide_next({}, llm);
    };
    auto tool = probe(R"([{"tool": "advanced", "query": " q "}])");
    CHECK(tool.kind == agent::AgentAction::Kind::ToolCall);
    CHECK(tool.tool == retrieval::ToolKind::Advanced);
    CHECK(tool.query == "q");

    auto unknown = probe(R"([{"tool": "search_tool_quantum", "query": "q"}])");
    CHECK(unknown.kind == agent::AgentAction::Kind::Reflect);
    CHECK(!unknown.sufficient);

    auto empty_query = probe(R"([{"tool": "basic", "query": "  "}])");
    CHECK(empty_query.kind == agent::AgentAction::Kind::Reflect);

    auto answer = probe(R"([{"text": "ok <answer>A</answer>"}])");
    CHECK(answer.kind == agent::AgentAction::Kind::Answer);

    auto reflect = probe(R"([{"text": "thinking\nDECISION: SUFFICIENT"}])");
    CHECK(reflect.kind == agent::AgentAction::Kind::Reflect);
    CHECK(reflect.sufficient);

    // the last marker line wins
    auto flip = probe(
        R"([{"text": "DECISION: SUFFICIENT\nmore\nDECISION: CONTINUE"}])");
    CHECK(!flip.sufficient);
}

TEST_CASE("episode: direct answer with zero tool calls") {
    EpisodeHarness h(json::object());
    auto llm = llm::ScriptedLlm::from_json(
        R"([{"text": "<answer>Baqubah, Diyala Province, Iraq</answer>"}])");
    kg::EvalCase ec{{kg::Query::Direction::Tail, "Battle of Baqubah", "location"},
                    "Baqubah"};
    auto res = h.run(llm, ec);
    CHECK(res.trajectory.terminated_by == agent::TerminatedBy::Answered);
    CHECK(res.trajectory.tools_used.total() == 0);
    CHECK(res.trajectory.llm_calls == 1);
    CHECK(res.candidates.surfaces ==
          std::vector<std::string>{"Baqubah", "Diyala Province", "Iraq"});
    CHECK(agent::render_trajectory(res.trajectory) ==
          "Step 0: Answer-Generation: "
          "<answer>Baqubah, Diyala Province, Iraq</answer>\n"
          "    | format ok\n"
          "terminated_by: ANSWERED");
}

TEST_CASE("episode: basic search, sufficient reflection, answer") {
    json corpus;
    corpus["basic"]["Love Scout genre"] = json::array(
        {{{"source_id", "d1"},
          {"title", "Love Scout"},
          {"text", "Love Scout is a romantic comedy series."}}});
    EpisodeHarness h(corpus);
    auto llm = llm::ScriptedLlm::from_json(R"([
        {"tool": "basic", "query": "Love Scout genre"},
        {"text": "The evidence shows the genre.\nDECISION: SUFFICIENT"},
        {"text": "<answer>romantic comedy, drama</answer>"}
    ])");
    kg::EvalCase ec{{kg::Query::Direction::Tail, "Love Scout", "genre"},
                    "romantic comedy"};
    auto res = h.run(llm, ec);
    CHECK(res.trajectory.terminated_by == agent::TerminatedBy::Answered);
    CHECK(res.trajectory.tools_used.basic == 1);
    CHECK(res.trajectory.tools_used.advanced == 0);
    CHECK(res.trajectory.llm_calls == 3);
    CHECK(agent::render_trajectory(res.trajectory) ==
          "Step 0: tool_call: search_tool_basic\n"
          "    query: \"Love Scout genre\"\n"
          "    | 1. Love Scout — Love Scout is a romantic comedy series.\n"
          "Step 1: Self-Reflection: The evidence shows the genre.\n"
          "DECISION: SUFFICIENT\n"
          "Step 2: Answer-Generation: <answer>romantic comedy, drama</answer>\n"
          "    | format ok\n"
          "terminated_by: ANSWERED");
}

TEST_CASE("episode: escalation from basic to advanced") {
    json corpus;
    corpus["advanced"]["Us Thai series cast"] = json::array(
        {{{"source_id", "d2"},
          {"title", "Us (TV series)"},
          {"text", "Us Thai series cast includes Sea and Earth."}}});
    EpisodeHarness h(corpus);
    auto llm = llm::ScriptedLlm::from_json(R"([
        {"tool": "basic", "query": "Us cast member"},
        {"text": "Basic lookup found nothing useful.\nDECISION: CONTINUE"},
        {"tool": "advanced", "query": "Us Thai series cast"},
        {"text": "Cast members identified.\nDECISION: SUFFICIENT"},
        {"text": "<answer>Sea Tawinan, Earth Teerapat</answer>"}
    ])");
    kg::EvalCase ec{{kg::Query::Direction::Tail, "Us", "cast member"},
                    "Sea Tawinan"};
    auto res = h.run(llm, ec);
    CHECK(res.trajectory.terminated_by == agent::TerminatedBy::Answered);
    CHECK(res.trajectory.tools_used.basic == 1);
    CHECK(res.trajectory.tools_used.advanced == 1);
    CHECK(res.trajectory.llm_calls == 5);
    CHECK(agent::render_trajectory(res.trajectory) ==
          "Step 0: tool_call: search_tool_basic\n"
          "    query: \"Us cast member\"\n"
          "    | [no results]\n"
          "Step 1: Self-Reflection: Basic lookup found nothing useful.\n"
          "DECISION: CONTINUE\n"
          "Step 2: tool_call: search_tool_advanced\n"
          "    query: \"Us Thai series cast\"\n"
          "    | 1. Us (TV series) — Us Thai series cast includes Sea and "
          "Earth.\n"
          "Step 3: Self-Reflection: Cast members identified.\n"
          "DECISION: SUFFICIENT\n"
          "Step 4: Answer-Generation: <answer>Sea Tawinan, Earth Teerapat"
          "</answer>\n"
          "    | format ok\n"
          "terminated_by: ANSWERED");
}

TEST_CASE("budget safety: adversarial tool caller hits the iteration cap") {
    EpisodeHarness h(json::object());
    llm::ScriptedLlm llm(
        {llm::LlmTurn{true, "search_tool_basic", "anything", ""}},
        /*loop_last=*/true);
    kg::EvalCase ec{{kg::Query::Direction::Tail, "E", "rel"}, "G"};
    auto res = h.run(llm, ec);
    CHECK(res.trajectory.terminated_by == agent::TerminatedBy::IterationBudget);
    CHECK(res.trajectory.salvaged);
    agent::AgentConfig cfg;
    CHECK(res.trajectory.tools_used.basic == cfg.max_iterations);
    // exactly max_iterations iteration turns plus max_gen_attempts answer turns
    CHECK(res.trajectory.llm_calls == cfg.max_iterations + cfg.max_gen_attempts);
    CHECK(llm.calls() == cfg.max_iterations + cfg.max_gen_attempts);
    CHECK(!res.candidates.surfaces.empty());  // salvage still yields candidates
}

TEST_CASE("budget safety: always-malformed answerer exits via FORMAT_BUDGET") {
    EpisodeHarness h(json::object());
    llm::ScriptedLlm llm(
        {llm::LlmTurn{false, "", "", "DECISION: SUFFICIENT"},
         llm::LlmTurn{false, "", "", "my answer is X, Y"}},
        /*loop_last=*/true);
    kg::EvalCase ec{{kg::Query::Direction::Tail, "E", "rel"}, "G"};
    auto res = h.run(llm, ec);
    CHECK(res.trajectory.terminated_by == agent::TerminatedBy::FormatBudget);
    CHECK(res.trajectory.salvaged);
    agent::AgentConfig cfg;
    CHECK(res.trajectory.llm_calls == 1 + cfg.max_gen_attempts);
    CHECK(res.candidates.surfaces ==
          std::vector<std::string>{"my answer is X", "Y"});
}

TEST_CASE("format retry succeeds on the second attempt") {
    EpisodeHarness h(json::object());
    auto llm = llm::ScriptedLlm::from_json(R"([
        {"text": "noted\nDECISION: SUFFICIENT"},
        {"text": "the answer is A"},
        {"text": "<answer>A</answer>"}
    ])");
    kg::EvalCase ec{{kg::Query::Direction::Tail, "E", "rel"}, "A"};
    auto res = h.run(llm, ec);
    CHECK(res.trajectory.terminated_by == agent::TerminatedBy::Answered);
    CHECK(!res.trajectory.salvaged);
    CHECK(res.candidates.surfaces == std::vector<std::string>{"A"});
    CHECK(res.trajectory.llm_calls == 3);
}
