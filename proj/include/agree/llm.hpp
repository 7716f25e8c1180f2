#pragma once

#include <functional>
#include <string>
#include <vector>

// Pluggable LLM client: an ordered message list plus tool schemas in,
// either a structured tool invocation or a text turn out.
namespace agree::llm {

enum class Role { System, User, Assistant, Tool };

struct ChatMessage {
    Role role = Role::User;
    std::string content;
};

struct ToolSchema {
    std::string name;
    std::string description;
    // every tool takes one string parameter named "query"
};

struct LlmTurn {
    bool is_tool_call = false;
    std::string tool_name;   // when is_tool_call
    std::string tool_query;  // when is_tool_call
    std::string text;        // otherwise
};

class LlmClient {
public:
    virtual ~LlmClient() = default;
    virtual LlmTurn complete(const std::vector<ChatMessage>& messages,
                             const std::vector<ToolSchema>& tools) = 0;
};

// Replays a fixed list of canned turns; optionally repeats the last turn
// forever (for adversarial budget tests).
class ScriptedLlm : public LlmClient {
public:
    explicit ScriptedLlm(std::vector<LlmTurn> turns, bool loop_last = false)
        : turns_(std::move(turns)), loop_last_(loop_last) {}

    // JSON: [{"tool": "basic"|"advanced", "query": "..."} | {"text": "..."}]
    static ScriptedLlm from_json(const std::string& json_text,
                                 bool loop_last = false);

    LlmTurn complete(const std::vector<ChatMessage>& messages,
                     const std::vector<ToolSchema>& tools) override;

    std::size_t calls() const { return calls_; }

private:
    std::vector<LlmTurn> turns_;
    bool loop_last_ = false;
    std::size_t next_ = 0;
    std::size_t calls_ = 0;
};

// Offline end-to-end mock: issues one basic search built from the query line
// of the task prompt, declares the evidence sufficient once an observation
// carrying an "Answers:" marker arrives, and answers with the listed
// candidates. Lets a full eval run execute with retrieval on the critical
// path and zero network.
class FollowRetrievalLlm : public LlmClient {
public:
    LlmTurn complete(const std::vector<ChatMessage>& messages,
                     const std::vector<ToolSchema>& tools) override;
};

// Chat-completions style HTTP adapter; the POST transport is injected so it
// can be wrapped by the replay cache. Body/response follow the common
// messages/tools JSON shape.
class HttpLlmClient : public LlmClient {
public:
    using PostFn = std::function<std::string(const std::string& json_body)>;
    HttpLlmClient(PostFn post, std::string model_id)
        : post_(std::move(post)), model_id_(std::move(model_id)) {}

    LlmTurn complete(const std::vector<ChatMessage>& messages,
                     const std::vector<ToolSchema>& tools) override;

private:
    PostFn post_;
    std::string model_id_;
};

const char* role_name(Role r);

}  // namespace agree::llm
