#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "agree/runner.hpp"
#include "agree/text.hpp"

namespace {

// Small INI for the builder: a [builder] section with window_start,
// window_end, categories (comma-separated), max_tail_cardinality, endpoint,
// fixture, page_size, subclass_expansion.
struct BuilderFileConfig {
    agree::builder::BuilderConfig cfg;
    std::string fixture_path;
};

BuilderFileConfig parse_builder_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open builder config " + path);
    BuilderFileConfig out;
    out.cfg.categories = agree::builder::default_categories();
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto t = agree::text::trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = t.substr(1, t.size() - 2);
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("builder config line " +
                                     std::to_string(lineno) +
                                     ": expected key = value");
        auto key = agree::text::trim(t.substr(0, eq));
        auto value = agree::text::trim(t.substr(eq + 1));
        auto full = section + "." + key;
        if (full == "builder.window_start") out.cfg.window_start = value;
        else if (full == "builder.window_end") out.cfg.window_end = value;
        else if (full == "builder.categories") {
            out.cfg.categories.clear();
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ','))
                out.cfg.categories.push_back(agree::text::trim(item));
        } else if (full == "builder.max_tail_cardinality")
            out.cfg.max_tail_cardinality = std::stoul(value);
        else if (full == "builder.endpoint") out.cfg.endpoint = value;
        else if (full == "builder.fixture") out.fixture_path = value;
        else if (full == "builder.page_size") out.cfg.page_size = std::stoul(value);
        else if (full == "builder.subclass_expansion")
            out.cfg.subclass_expansion = value == "true" || value == "1";
        else
            throw std::runtime_error("builder config: unknown key " + full);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"agree: agentic knowledge-graph completion toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "run", run_dir, case_id;
    std::string predictions_path, train_path;
    std::vector<std::size_t> metrics_n = {1, 3, 5, 10};
    bool ra_literal = false;

    auto* eval_cmd = app.add_subcommand("eval", "run the agent over a test split");
    eval_cmd->add_option("--config", config_path, "run config file")->required();
    eval_cmd->add_option("--out", out_dir, "output directory (default: run)");

    auto* build_cmd =
        app.add_subcommand("build-emerging", "build the emerging-entities benchmark");
    build_cmd->add_option("--config", config_path, "builder config file")->required();
    std::string build_out;
    build_cmd->add_option("--out", build_out, "output directory")->required();

    auto* show_cmd = app.add_subcommand("show-trajectory",
                                        "print one stored trajectory");
    show_cmd->add_option("--run", run_dir, "run directory")->required();
    show_cmd->add_option("--case", case_id, "case id")->required();

    auto* score_cmd = app.add_subcommand("score", "score precomputed predictions");
    score_cmd->add_option("--predictions", predictions_path, "predictions JSONL")
        ->required();
    score_cmd->add_option("--train", train_path, "training triples TSV")->required();
    score_cmd->add_option("--metrics-n", metrics_n, "cutoffs (default 1 3 5 10)");
    score_cmd->add_flag("--ra-literal-rule", ra_literal,
                        "use the literal N <= N_rel inclusion rule");

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval_cmd->parsed()) {
            auto cfg = agree::config::parse_run_config(config_path);
            auto report = agree::runner::run_eval(cfg, out_dir);
            std::ifstream txt(std::filesystem::path(out_dir) / "report.txt");
            std::cout << txt.rdbuf();
            std::cout << "run directory: " << out_dir << "\n";
        } else if (build_cmd->parsed()) {
            auto parsed = parse_builder_config(config_path);
            if (parsed.fixture_path.empty())
                throw std::runtime_error(
                    "builder.fixture is required: the builder runs against a "
                    "local endpoint snapshot");
            agree::builder::FixtureWikidataClient client(parsed.fixture_path);
            auto m = agree::runner::build_emerging(parsed.cfg, client, build_out);
            std::cout << "triples: " << m.triple_count
                      << "\nrelations: " << m.relation_count
                      << "\nentities: " << m.entity_count << "\nwritten to "
                      << build_out << "\n";
        } else if (show_cmd->parsed()) {
            std::cout << agree::runner::show_trajectory(run_dir, case_id);
        } else if (score_cmd->parsed()) {
            auto report = agree::runner::score_predictions(
                predictions_path, train_path, metrics_n, ra_literal);
            std::cout << agree::metrics::render_report(report);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
