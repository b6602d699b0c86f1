#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dfrs/check.hpp"
#include "dfrs/cnl.hpp"
#include "dfrs/conformance.hpp"
#include "dfrs/expansion.hpp"
#include "dfrs/model_io.hpp"
#include "dfrs/tracegen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// All randomness flows from one seed so reruns are reproducible; the default
// is a fixed constant, never the wall clock.
constexpr std::uint64_t kDefaultSeed = 1729;

dfrs::Model load_checked(const fs::path& path) {
    dfrs::Model model = dfrs::load_model_file(path);
    dfrs::CheckReport report = dfrs::check_sdfrs(model.sdfrs);
    if (!report.ok()) {
        std::cerr << "model " << path.string() << " is inconsistent:\n" << report.to_string();
        throw dfrs::Error(dfrs::Error::Kind::inconsistent_model, "inconsistent model");
    }
    return model;
}

void apply_domain_overrides(dfrs::Model& model, const std::vector<std::string>& overrides) {
    for (const std::string& text : overrides) {
        std::size_t eq = text.find('=');
        if (eq == std::string::npos)
            throw dfrs::Error(dfrs::Error::Kind::io,
                              "--domain expects name=[values], got '" + text + "'");
        std::string name = text.substr(0, eq);
        json values = json::parse(text.substr(eq + 1));
        if (!values.is_array())
            throw dfrs::Error(dfrs::Error::Kind::io, "--domain values must be a JSON array");
        dfrs::Type type = dfrs::Type::boolean;
        bool found = false;
        for (const dfrs::VarDecl& d : model.sdfrs.variables.inputs) {
            if (d.name == name) {
                type = d.type;
                found = true;
            }
        }
        if (!found)
            throw dfrs::Error(dfrs::Error::Kind::io, "'" + name + "' is not an input");
        std::vector<dfrs::Value> domain;
        for (const auto& v : values) domain.push_back(dfrs::value_from_json(v, type));
        for (auto& [input, dom] : model.domains)
            if (input == name) dom = std::move(domain);
    }
}

std::string trace_file_name(std::size_t index, const char* extension) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "trace_%03zu.%s", index, extension);
    return buf;
}

int cmd_check(const fs::path& model_path, bool lint, std::uint64_t lint_bound) {
    dfrs::Model model = dfrs::load_model_file(model_path);
    dfrs::CheckReport report = dfrs::check_sdfrs(model.sdfrs);
    if (!report.ok()) {
        std::cout << report.to_string();
        std::cerr << report.violations.size() << " consistency violation(s)\n";
        return 1;
    }
    std::cout << "model is consistent (" << model.sdfrs.variables.inputs.size() << " inputs, "
              << model.sdfrs.variables.outputs.size() << " outputs, "
              << model.sdfrs.variables.timers.size() << " timers)\n";
    if (lint) {
        dfrs::LintReport lr = dfrs::lint_model(model.sdfrs, model.domains, model.time_step,
                                               lint_bound);
        for (const dfrs::LintFinding& f : lr.findings)
            std::cout << "lint [" << f.kind << "] " << f.detail << " at "
                      << f.state.canonical() << "\n";
        std::cout << "lint: " << lr.findings.size() << " finding(s)\n";
    }
    return 0;
}

int cmd_parse(const fs::path& requirements_path, const fs::path& symbols_path,
              const fs::path& output, std::int64_t step) {
    auto sentences = dfrs::load_requirements_file(requirements_path);
    dfrs::SymbolTable symbols = dfrs::load_symbols_file(symbols_path);
    std::vector<dfrs::RequirementFrame> frames;
    for (const auto& [id, sentence] : sentences)
        frames.push_back(dfrs::parse_requirement(sentence, id));
    dfrs::Model model = dfrs::assemble_model(frames, symbols, step);
    dfrs::CheckReport report = dfrs::check_sdfrs(model.sdfrs);
    if (!report.ok()) {
        std::cerr << "compiled model is inconsistent:\n" << report.to_string();
        return 1;
    }
    dfrs::save_model_file(model, output);
    std::cout << "wrote " << output.string() << " (" << frames.size() << " requirements)\n";
    return 0;
}

int cmd_expand(const fs::path& model_path, std::uint64_t bound, std::int64_t step,
               const std::vector<std::string>& domains, const fs::path& outdir) {
    dfrs::Model model = load_checked(model_path);
    apply_domain_overrides(model, domains);
    if (step > 0) model.time_step = step;
    dfrs::EDfrs expansion =
        dfrs::build_tr(model.sdfrs, model.domains, bound, model.time_step);
    fs::create_directories(outdir);
    dfrs::write_file(outdir / "edfrs.txt", dfrs::edfrs_to_text(expansion));
    dfrs::write_file(outdir / "edfrs.dot", dfrs::edfrs_to_dot(expansion));
    std::cout << "bound " << bound << ": " << expansion.states.size() << " states, "
              << expansion.transitions.size() << " transitions -> " << outdir.string() << "\n";
    return 0;
}

int cmd_gen(const fs::path& model_path, std::uint64_t calls, std::uint64_t size,
            std::uint64_t seed, std::int64_t step, bool with_json, const fs::path& outdir) {
    dfrs::Model model = load_checked(model_path);
    if (step > 0) model.time_step = step;
    std::cout << "seed: " << seed << "\n";
    std::vector<dfrs::Trace> traces = dfrs::sample(model, calls, size, seed);
    fs::create_directories(outdir);
    for (std::size_t i = 0; i < traces.size(); ++i) {
        dfrs::TestDataTable table = dfrs::export_table(model, traces[i]);
        dfrs::write_file(outdir / trace_file_name(i, "csv"), dfrs::table_to_csv(table));
        if (with_json)
            dfrs::write_file(outdir / trace_file_name(i, "json"),
                             dfrs::table_to_json(table).dump(2) + "\n");
    }
    dfrs::CoverageReport cov = dfrs::coverage(model, traces);
    dfrs::write_file(outdir / "coverage.json", dfrs::coverage_to_json(cov).dump(2) + "\n");
    std::cout << traces.size() << " traces -> " << outdir.string() << " ("
              << cov.covered.size() << "/" << cov.hits.size() << " requirements covered)\n";
    return 0;
}

int cmd_run(const fs::path& model_path, const std::vector<fs::path>& tables,
            const std::string& sut, const std::vector<std::string>& sut_args, int timeout_ms) {
    dfrs::Model model = load_checked(model_path);
    dfrs::SutSession session{sut, sut_args, timeout_ms};
    bool all_passed = true;
    for (const fs::path& path : tables) {
        dfrs::TestDataTable table = dfrs::table_from_csv(dfrs::read_file(path), model);
        dfrs::RunVerdict verdict = dfrs::run_trace_against_sut(table, session);
        std::cout << path.filename().string() << ": " << verdict.to_string() << "\n";
        all_passed = all_passed && verdict.passed();
    }
    return all_passed ? 0 : 1;
}

int cmd_mutate(const fs::path& model_path, std::uint64_t seed, std::uint64_t calls,
               std::uint64_t size, std::size_t max, const fs::path& report_path) {
    dfrs::Model model = load_checked(model_path);
    std::cout << "seed: " << seed << "\n";
    std::vector<dfrs::Trace> suite = dfrs::sample(model, calls, size, seed);
    dfrs::MutantSet mutants = dfrs::generate_mutants(model.sdfrs, seed, max);
    dfrs::MutationReport report = dfrs::mutation_score(model, mutants, suite);
    std::cout << report.to_string();
    if (!report_path.empty()) {
        json doc;
        doc["total"] = report.total;
        doc["discarded"] = report.discarded;
        doc["killed"] = report.killed;
        doc["survivors"] = report.survivors;
        doc["score"] = report.score;
        doc["suite"] = {{"seed", seed}, {"calls", calls}, {"size", size}};
        dfrs::write_file(report_path, doc.dump(2) + "\n");
        std::cout << "wrote " << report_path.string() << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Modelling, expansion, test generation and mutation analysis "
                 "for timed data-flow reactive systems"};
    app.require_subcommand(1);

    std::string model_path;
    std::uint64_t seed = kDefaultSeed;

    auto* check = app.add_subcommand("check", "Check a model file for consistency");
    check->add_option("model", model_path, "model JSON file")->required();
    bool lint = false;
    std::uint64_t lint_bound = 200;
    check->add_flag("--lint", lint, "also lint reaction chains and entry overlaps");
    check->add_option("--lint-bound", lint_bound, "expansion bound used by the lint");

    auto* parse = app.add_subcommand("parse", "Compile requirements into a model file");
    std::string requirements_path, symbols_path, parse_output = "model.json";
    std::int64_t parse_step = 1;
    parse->add_option("--requirements", requirements_path, "requirement sentences, one per line")
        ->required();
    parse->add_option("--symbols", symbols_path, "phrase-to-variable symbol table (JSON)")
        ->required();
    parse->add_option("-o,--output", parse_output, "output model file");
    parse->add_option("--step", parse_step, "time step stored in the model")
        ->check(CLI::PositiveNumber);

    auto* expand = app.add_subcommand("expand", "Bounded expansion of the state space");
    std::uint64_t bound = 10;
    std::int64_t step_override = 0;
    std::vector<std::string> domain_overrides;
    std::string expand_out = "expansion";
    expand->add_option("model", model_path, "model JSON file")->required();
    expand->add_option("--bound", bound, "worklist iteration bound");
    expand->add_option("--step", step_override, "override the model's time step")
        ->check(CLI::PositiveNumber);
    expand->add_option("--domain", domain_overrides,
                       "restrict an input domain, e.g. name=[false]");
    expand->add_option("-o,--output", expand_out, "output directory");

    auto* gen = app.add_subcommand("gen", "Generate random valid test traces");
    std::uint64_t calls = 1, size = 100;
    bool with_json = false;
    std::string gen_out = "testdata";
    gen->add_option("model", model_path, "model JSON file")->required();
    gen->add_option("--calls", calls, "sampling calls (11 traces each)");
    gen->add_option("--size", size, "maximum trace length");
    gen->add_option("--seed", seed, "RNG seed");
    gen->add_option("--step", step_override, "override the model's time step")
        ->check(CLI::PositiveNumber);
    gen->add_flag("--json", with_json, "also write JSON test data");
    gen->add_option("-o,--output", gen_out, "output directory");

    auto* run = app.add_subcommand("run", "Run exported test data against a SUT");
    std::vector<std::string> table_paths;
    std::string sut_command;
    std::vector<std::string> sut_args;
    int timeout_ms = 1000;
    run->add_option("model", model_path, "model JSON file")->required();
    run->add_option("--table", table_paths, "test data CSV file(s)")->required();
    run->add_option("--sut", sut_command, "SUT executable")->required();
    run->add_option("--sut-arg", sut_args, "argument passed to the SUT");
    run->add_option("--timeout", timeout_ms, "per-step timeout in milliseconds")
        ->check(CLI::PositiveNumber);

    auto* mutate = app.add_subcommand("mutate", "Mutation-based strength analysis");
    std::uint64_t mutate_calls = 10, mutate_size = 100;
    std::size_t max_mutants = SIZE_MAX;
    std::string report_path = "mutation.json";
    mutate->add_option("model", model_path, "model JSON file")->required();
    mutate->add_option("--seed", seed, "RNG seed for suite and mutant selection");
    mutate->add_option("--calls", mutate_calls, "sampling calls for the suite");
    mutate->add_option("--size", mutate_size, "maximum trace length for the suite");
    mutate->add_option("--max", max_mutants, "cap on the number of mutants");
    mutate->add_option("-o,--output", report_path, "mutation report JSON file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(check)) return cmd_check(model_path, lint, lint_bound);
        if (app.got_subcommand(parse))
            return cmd_parse(requirements_path, symbols_path, parse_output, parse_step);
        if (app.got_subcommand(expand))
            return cmd_expand(model_path, bound, step_override, domain_overrides, expand_out);
        if (app.got_subcommand(gen))
            return cmd_gen(model_path, calls, size, seed, step_override, with_json, gen_out);
        if (app.got_subcommand(run)) {
            std::vector<fs::path> tables(table_paths.begin(), table_paths.end());
            return cmd_run(model_path, tables, sut_command, sut_args, timeout_ms);
        }
        if (app.got_subcommand(mutate))
            return cmd_mutate(model_path, seed, mutate_calls, mutate_size, max_mutants,
                              report_path);
    } catch (const dfrs::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
