#pragma once

#include <string>
#include <vector>

#include "agree/kg.hpp"

// Prompt templates and their placeholder fills. Templates are plain text
// with [query], [relation], [entity], [entity description] and example-slot
// markers; the shipped defaults live under assets/prompts/ and are embedded
// here so the library works without an asset path.
namespace agree::prompts {

const std::string& task_instruct_template();
const std::string& answer_generation_template();

// Replace every occurrence of `placeholder` in `tpl`.
std::string fill(std::string tpl, const std::string& placeholder,
                 const std::string& value);

std::string render_task_instruct(
    const kg::Query& query, const std::string& entity_label,
    const std::string& entity_description,
    const std::vector<kg::Triple>& relation_examples,
    const std::vector<kg::Triple>& entity_triples,
    const std::string& tpl = task_instruct_template());

std::string render_answer_generation(
    const std::vector<std::string>& relation_endings,
    const std::string& tpl = answer_generation_template());

}  // namespace agree::prompts
