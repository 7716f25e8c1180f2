#include "agree/prompts.hpp"

namespace agree::prompts {

namespace {

const char* kTaskInstruct = R"(You are a Knowledge Graph Completion Agent. Complete the missing entity in knowledge graph triplets (head_entity, relation, tail_entity).

TASK:

- When given head entity -> find tail entity

- When given tail entity -> find head entity

RELATION STRUCTURE:

- Relations consist of 3 words (format: domain/type/property)

- Example: people/person/birth_date

- Second word (type) defines what the head entity should be (e.g., "person")

- Third word (property) defines what the tail entity should be (e.g., "date")

SPECIAL ENTITY HANDLING:

- If the target entity type is location, find the location on all possible granularities (e.g. town, city, state, country)

- If the relation can have multiple answers, such as "occupation" or "spouse" where a person could have multiple occupations/spouses throught the lifetime, try to find all potential answers and list out their associated time frames.

Information retrieval guidelines:

1. If you're confident in your knowledge, answer directly

2. Otherwise use retrieval tools in this order:

   - Start with search_tool_basic

   - Escalate to search_tool_advanced if needed

3. Always search thoroughly - even if you find one answer, make sure you haven't missed others

Do not ask for user input. Make decisions independently based on your knowledge and retrieved information.

When you reflect on retrieved evidence, end the reflection with exactly one marker line: DECISION: CONTINUE or DECISION: SUFFICIENT.

[query]

Example triplets with relation [relation] (DO NOT REPEAT THESE TRIPLETS IN ANSWERS):

[triples with the same relation]

Known information about entity [entity] (DO NOT REPEAT THESE TRIPLETS IN ANSWERS):[entity description]

[triples with the same entity]
)";

const char* kAnswerGeneration = R"(ANSWER REQUIREMENTS:

- Provide at least 10 possible answers, ranked from most to least confident

- Include different granularity levels (e.g., if "tanker" is an answer, also include "ship")

- For location entities: include all granularity levels (neighborhood, town, city, state, country)

- Answer category and format should be similar to these examples: [endings of triples with the same relation]

OUTPUT FORMAT:

- STRICTLY use this format only: <answer>ANSWER_1, ANSWER_2, ...</answer>

- DO NOT include explanations, reasoning, or any text outside the <answer> tags

- Think concisely and provide answers immediately
)";

std::string triples_block(const std::vector<kg::Triple>& triples) {
    if (triples.empty()) return "(none known)";
    std::string out;
    for (const auto& t : triples) {
        if (!out.empty()) out += '\n';
        out += "(" + t.head + ", " + t.relation + ", " + t.tail + ")";
    }
    return out;
}

}  // namespace

const std::string& task_instruct_template() {
    static const std::string tpl = kTaskInstruct;
    return tpl;
}

const std::string& answer_generation_template() {
    static const std::string tpl = kAnswerGeneration;
    return tpl;
}

std::string fill(std::string tpl, const std::string& placeholder,
                 const std::string& value) {
    std::size_t pos = 0;
    while ((pos = tpl.find(placeholder, pos)) != std::string::npos) {
        tpl.replace(pos, placeholder.size(), value);
        pos += value.size();
    }
    return tpl;
}

std::string render_task_instruct(const kg::Query& query,
                                 const std::string& entity_label,
                                 const std::string& entity_description,
                                 const std::vector<kg::Triple>& relation_examples,
                                 const std::vector<kg::Triple>& entity_triples,
                                 const std::string& tpl) {
    std::string query_line = "Query: " + kg::render_query(query);
    query_line += query.direction == kg::Query::Direction::Tail
                      ? " - predict the tail entity."
                      : " - predict the head entity.";
    std::string out = fill(tpl, "[query]", query_line);
    out = fill(std::move(out), "[relation]", query.relation);
    out = fill(std::move(out), "[triples with the same relation]",
               triples_block(relation_examples));
    out = fill(std::move(out), "[entity]",
               entity_label.empty() ? query.known_entity : entity_label);
    out = fill(std::move(out), "[entity description]",
               entity_description.empty() ? " (none known)"
                                          : " " + entity_description);
    out = fill(std::move(out), "[triples with the same entity]",
               triples_block(entity_triples));
    return out;
}

std::string render_answer_generation(const std::vector<std::string>& relation_endings,
                                     const std::string& tpl) {
    std::string examples;
    if (relation_endings.empty()) {
        examples = "(none)";
    } else {
        for (const auto& e : relation_endings) {
            if (!examples.empty()) examples += ", ";
            examples += e;
        }
    }
    return fill(tpl, "[endings of triples with the same relation]", examples);
}

}  // namespace agree::prompts
