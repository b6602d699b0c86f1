#include "dfrs/tracegen.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include "dfrs/eval.hpp"

namespace dfrs {

std::string model_id(const Model& model) {
    // Hash of the canonical ingredients; stable across runs and platforms.
    std::string blob = model.sdfrs.initial.canonical();
    auto decls = [&](const std::vector<VarDecl>& group) {
        for (const VarDecl& d : group) blob += d.name + ":" + type_name(d.type) + ";";
    };
    decls(model.sdfrs.variables.inputs);
    decls(model.sdfrs.variables.outputs);
    decls(model.sdfrs.variables.timers);
    for (const auto& component : model.sdfrs.functions.components) {
        for (const FunctionEntry& e : component) {
            blob += e.requirement + "{";
            for (const Disj& d : e.static_guard.clauses) {
                for (const BExp& a : d.atoms)
                    blob += side_name(a.side) + " " + a.var + " " + op_name(a.op) + " " +
                            a.rhs.tagged_string() + ",";
                blob += "|";
            }
            blob += "/";
            for (const Disj& d : e.timed_guard.clauses) {
                for (const BExp& a : d.atoms)
                    blob += side_name(a.side) + " " + a.var + " " + op_name(a.op) + " " +
                            a.rhs.tagged_string() + ",";
                blob += "|";
            }
            blob += "/";
            for (const Asgmt& a : e.assignments)
                blob += a.target + ":=" + (a.is_reset() ? "reset" : a.value->tagged_string()) + ",";
            blob += "}";
        }
        blob += "#";
    }
    for (const auto& [name, values] : model.domains) {
        blob += name + "[";
        for (const Value& v : values) blob += v.tagged_string() + ",";
        blob += "]";
    }
    blob += "@" + std::to_string(model.time_step);

    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(blob)));
    return buf;
}

bool stop_draw(SplitMix64& rng, std::uint64_t remaining) {
    return rng.below(remaining + 1) == 0;
}

Trace gen_valid_trace(const Model& model, std::uint64_t size, std::uint64_t seed) {
    CheckReport report = check_sdfrs(model.sdfrs);
    if (!report.ok())
        throw Error(Error::Kind::inconsistent_model,
                    "cannot generate traces from an inconsistent model:\n" + report.to_string());

    SplitMix64 rng(seed);
    Trace trace;
    trace.seed = seed;
    trace.model_id = model_id(model);

    State current = model.sdfrs.initial;
    for (std::uint64_t remaining = size; remaining > 0; --remaining) {
        std::vector<Trans> options;
        try {
            options = gen_transitions(current, model.sdfrs, model.domains, model.time_step);
        } catch (const Error& e) {
            if (e.kind() != Error::Kind::empty_domain) throw;
        }
        if (options.empty())
            throw Error(Error::Kind::dead_state,
                        "no transition leaves state " + current.canonical() +
                            " (stable state with empty input combinations)");
        if (stop_draw(rng, remaining)) break;
        Trans& chosen = options[rng.below(options.size())];
        trace.steps.push_back(TraceStep{std::move(chosen.label), chosen.target});
        current = std::move(chosen.target);
    }
    return trace;
}

std::vector<Trace> sample(const Model& model, std::uint64_t calls, std::uint64_t size,
                          std::uint64_t seed) {
    std::vector<Trace> traces;
    traces.reserve(calls * 11);
    for (std::uint64_t i = 0; i < calls * 11; ++i)
        traces.push_back(gen_valid_trace(model, size, SplitMix64::derive(seed, i)));
    return traces;
}

ReplayVerdict validate_trace(const Model& model, const Trace& trace) {
    State current = model.sdfrs.initial;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const TraceStep& step = trace.steps[i];
        std::vector<Trans> options =
            gen_transitions(current, model.sdfrs, model.domains, model.time_step);
        auto it = std::find_if(options.begin(), options.end(),
                               [&](const Trans& t) { return t.label == step.label; });
        if (it == options.end())
            return {ReplayFailure{i, "label is not enabled: " + label_canonical(step.label)}};
        if (!(it->target == step.resulting))
            return {ReplayFailure{i, "state-mismatch: recorded state differs from the "
                                     "transition target"}};
        current = step.resulting;
    }
    return {};
}

TestDataTable export_table(const Model& model, const Trace& trace) {
    ReplayVerdict verdict = validate_trace(model, trace);
    if (!verdict.valid())
        throw Error(Error::Kind::invalid_trace,
                    "cannot export an invalid trace (step " +
                        std::to_string(verdict.failure->step) + ": " +
                        verdict.failure->reason + ")");

    TestDataTable table;
    for (const VarDecl& d : model.sdfrs.variables.inputs) table.input_names.push_back(d.name);
    for (const VarDecl& d : model.sdfrs.variables.outputs) table.output_names.push_back(d.name);

    const std::string& clock = model.sdfrs.variables.clock.name;
    auto snapshot = [&](const State& s) {
        TestDataTable::Row row;
        row.time = s.at(clock).current.as_int();
        for (const std::string& n : table.input_names) row.inputs.push_back(s.at(n).current);
        for (const std::string& n : table.output_names) row.outputs.push_back(s.at(n).current);
        return row;
    };

    // The last state seen at each instant is the quiescent one: function
    // transitions keep the clock, so later entries overwrite the row until a
    // delay moves time forward.
    table.rows.push_back(snapshot(model.sdfrs.initial));
    for (const TraceStep& step : trace.steps) {
        TestDataTable::Row row = snapshot(step.resulting);
        if (row.time == table.rows.back().time)
            table.rows.back() = std::move(row);
        else
            table.rows.push_back(std::move(row));
    }

    // A trace may stop between a delay and the reactions it enables; the
    // snapshot is per instant, so the final row gets the remaining reactions
    // applied (first enabled entry at each step).
    constexpr std::size_t kSettleBound = 16;
    State last = trace.steps.empty() ? model.sdfrs.initial : trace.steps.back().resulting;
    for (std::size_t i = 0;; ++i) {
        std::vector<FunctionEntry> enabled = enabled_entries(last, model.sdfrs);
        if (enabled.empty()) break;
        if (i == kSettleBound)
            throw Error(Error::Kind::invalid_trace,
                        "final instant does not settle within " +
                            std::to_string(kSettleBound) + " reactions");
        last = apply_asgmts(last, enabled.front().assignments);
        table.rows.back() = snapshot(last);
    }
    return table;
}

CoverageReport coverage(const Model& model, const std::vector<Trace>& traces) {
    CoverageReport report;
    std::map<std::string, std::size_t> counts;
    std::vector<std::string> declared;
    for (const auto& component : model.sdfrs.functions.components) {
        for (const FunctionEntry& e : component) {
            if (!counts.count(e.requirement)) declared.push_back(e.requirement);
            counts.emplace(e.requirement, 0);
        }
    }

    std::set<std::string> fingerprints;
    for (std::size_t i = 0; i < traces.size(); ++i) {
        ReplayVerdict verdict = validate_trace(model, traces[i]);
        if (!verdict.valid())
            throw Error(Error::Kind::invalid_trace,
                        "trace " + std::to_string(i) + " does not replay (step " +
                            std::to_string(verdict.failure->step) + ": " +
                            verdict.failure->reason + ")");
        std::string fingerprint;
        for (const TraceStep& step : traces[i].steps) {
            fingerprint += label_canonical(step.label) + "\n";
            if (const auto* f = std::get_if<FunctionLabel>(&step.label)) {
                auto it = counts.find(f->requirement);
                if (it != counts.end()) ++it->second;
            }
        }
        fingerprints.insert(std::move(fingerprint));
    }

    report.trace_count = traces.size();
    report.distinct_traces = fingerprints.size();
    for (const std::string& req : declared) {
        std::size_t n = counts[req];
        report.hits.emplace_back(req, n);
        (n > 0 ? report.covered : report.uncovered).push_back(req);
    }
    return report;
}

} // namespace dfrs
