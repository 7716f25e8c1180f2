#include "agree/llm.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

#include "agree/text.hpp"

namespace agree::llm {

const char* role_name(Role r) {
    switch (r) {
        case Role::System: return "system";
        case Role::User: return "user";
        case Role::Assistant: return "assistant";
        case Role::Tool: return "tool";
    }
    return "?";
}

ScriptedLlm ScriptedLlm::from_json(const std::string& json_text, bool loop_last) {
    auto arr = nlohmann::json::parse(json_text);
    std::vector<LlmTurn> turns;
    for (const auto& item : arr) {
        LlmTurn t;
        if (item.contains("tool")) {
            t.is_tool_call = true;
            auto name = item.at("tool").get<std::string>();
            t.tool_name = name == "basic"      ? "search_tool_basic"
                          : name == "advanced" ? "search_tool_advanced"
                                               : name;
            t.tool_query = item.at("query").get<std::string>();
        } else {
            t.text = item.at("text").get<std::string>();
        }
        turns.push_back(std::move(t));
    }
    return ScriptedLlm(std::move(turns), loop_last);
}

LlmTurn ScriptedLlm::complete(const std::vector<ChatMessage>&,
                              const std::vector<ToolSchema>&) {
    ++calls_;
    if (next_ >= turns_.size()) {
        if (loop_last_ && !turns_.empty()) return turns_.back();
        throw std::runtime_error("scripted llm: out of turns (call " +
                                 std::to_string(calls_) + ")");
    }
    return turns_[next_++];
}

namespace {

// Pull "(E, r, ?)" or "(?, r, E)" out of the rendered query line.
std::string search_query_from_prompt(const std::string& system_prompt) {
    auto pos = system_prompt.find("Query: (");
    if (pos == std::string::npos) return "";
    auto open = system_prompt.find('(', pos);
    auto close = system_prompt.find(')', open);
    if (close == std::string::npos) return "";
    auto inside = system_prompt.substr(open + 1, close - open - 1);
    // split on ", " into exactly three parts
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (parts.size() < 2) {
        auto comma = inside.find(", ", start);
        if (comma == std::string::npos) break;
        parts.push_back(inside.substr(start, comma - start));
        start = comma + 2;
    }
    parts.push_back(inside.substr(start));
    if (parts.size() != 3) return "";
    if (parts[2] == "?") return parts[0] + " " + parts[1];
    if (parts[0] == "?") return parts[2] + " " + parts[1];
    return "";
}

}  // namespace

LlmTurn FollowRetrievalLlm::complete(const std::vector<ChatMessage>& messages,
                                     const std::vector<ToolSchema>&) {
    const ChatMessage* last_tool = nullptr;
    bool any_tool_msg = false;
    for (const auto& m : messages) {
        if (m.role == Role::Tool) {
            last_tool = &m;
            any_tool_msg = true;
        }
    }
    const auto& last = messages.back();
    bool answer_phase = last.role == Role::User &&
                        last.content.find("ANSWER REQUIREMENTS") != std::string::npos;
    if (answer_phase) {
        LlmTurn t;
        std::string candidates = "unknown";
        if (last_tool) {
            auto pos = last_tool->content.find("Answers:");
            if (pos != std::string::npos) {
                auto rest = last_tool->content.substr(pos + 8);
                auto end = rest.find_first_of(".\n");
                if (end != std::string::npos) rest = rest.substr(0, end);
                auto trimmed = text::trim(rest);
                if (!trimmed.empty()) candidates = trimmed;
            }
        }
        t.text = "<answer>" + candidates + "</answer>";
        return t;
    }
    if (any_tool_msg) {
        LlmTurn t;
        t.text =
            "The retrieved evidence lists candidate answers for the query.\n"
            "DECISION: SUFFICIENT";
        return t;
    }
    LlmTurn t;
    t.is_tool_call = true;
    t.tool_name = "search_tool_basic";
    t.tool_query = messages.empty()
                       ? ""
                       : search_query_from_prompt(messages.front().content);
    if (t.tool_query.empty()) {
        // no parseable query; answer directly rather than stall
        LlmTurn a;
        a.text = "<answer>unknown</answer>";
        return a;
    }
    return t;
}

LlmTurn HttpLlmClient::complete(const std::vector<ChatMessage>& messages,
                                const std::vector<ToolSchema>& tools) {
    nlohmann::json body;
    body["model"] = model_id_;
    auto& msgs = body["messages"] = nlohmann::json::array();
    for (const auto& m : messages)
        msgs.push_back({{"role", role_name(m.role)}, {"content", m.content}});
    if (!tools.empty()) {
        auto& ts = body["tools"] = nlohmann::json::array();
        for (const auto& t : tools) {
            ts.push_back(
                {{"type", "function"},
                 {"function",
                  {{"name", t.name},
                   {"description", t.description},
                   {"parameters",
                    {{"type", "object"},
                     {"properties",
                      {{"query", {{"type", "string"}}}}},
                     {"required", {"query"}}}}}}});
        }
    }
    auto reply = nlohmann::json::parse(post_(body.dump()));
    const auto& message = reply.at("choices").at(0).at("message");
    LlmTurn turn;
    if (message.contains("tool_calls") && !message["tool_calls"].empty()) {
        const auto& call = message["tool_calls"][0]["function"];
        turn.is_tool_call = true;
        turn.tool_name = call.at("name").get<std::string>();
        auto args = nlohmann::json::parse(call.at("arguments").get<std::string>());
        turn.tool_query = args.value("query", "");
    } else if (message.contains("content") && !message["content"].is_null()) {
        turn.text = message["content"].get<std::string>();
    }
    return turn;
}

}  // namespace agree::llm
