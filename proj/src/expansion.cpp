#include "dfrs/expansion.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <limits>
#include <unordered_set>

#include "dfrs/eval.hpp"

namespace dfrs {

std::vector<FunctionEntry> enabled_entries(const State& state, const SDfrs& model) {
    std::vector<FunctionEntry> enabled;
    for (const auto& component : model.functions.components) {
        for (const FunctionEntry& entry : component) {
            if (eval_cnf(state, entry.static_guard) && eval_cnf(state, entry.timed_guard))
                enabled.push_back(entry);
        }
    }
    return enabled;
}

bool is_stable(const State& state, const SDfrs& model) {
    for (const auto& component : model.functions.components) {
        for (const FunctionEntry& entry : component) {
            if (eval_cnf(state, entry.static_guard) && eval_cnf(state, entry.timed_guard))
                return false;
        }
    }
    return true;
}

std::vector<std::vector<Asgmt>> input_combinations(const InputDomains& domains) {
    for (const auto& [name, values] : domains) {
        if (values.empty())
            throw Error(Error::Kind::empty_domain, "input '" + name + "' has an empty domain");
    }
    std::vector<std::vector<Asgmt>> result;
    std::vector<Asgmt> current;
    current.reserve(domains.size());
    // Odometer over declaration order: the last input varies fastest.
    auto recurse = [&](auto&& self, std::size_t index) -> void {
        if (index == domains.size()) {
            result.push_back(current);
            return;
        }
        for (const Value& v : domains[index].second) {
            current.push_back(Asgmt{domains[index].first, v});
            self(self, index + 1);
            current.pop_back();
        }
    };
    recurse(recurse, 0);
    return result;
}

namespace {

State delay_target(const State& source, const DelayLabel& label, const std::string& clock) {
    State target = source;
    const ValuePair& gc = source.at(clock);
    std::int64_t now = gc.current.as_int();
    if (now > std::numeric_limits<std::int64_t>::max() - label.delta)
        throw Error(Error::Kind::overflow, "global clock overflow during delay");
    target.set(clock, ValuePair{gc.current, Value::natural(now + label.delta)});
    for (const Asgmt& a : label.input_assignments) {
        const ValuePair& old = source.at(a.target);
        if (a.value->type() != old.current.type())
            throw Error(Error::Kind::tag_mismatch,
                        "delay assigns '" + a.target + "' a value of the wrong tag");
        target.set(a.target, ValuePair{old.current, *a.value});
    }
    return target;
}

} // namespace

std::vector<Trans> gen_transitions(const State& state, const SDfrs& model,
                                   const InputDomains& domains, std::int64_t step) {
    std::vector<Trans> out;
    std::vector<FunctionEntry> enabled = enabled_entries(state, model);
    if (enabled.empty()) {
        const std::string& clock = model.variables.clock.name;
        for (std::vector<Asgmt>& combo : input_combinations(domains)) {
            DelayLabel label{step, std::move(combo)};
            State target = delay_target(state, label, clock);
            out.push_back(Trans{state, TransLabel(std::move(label)), std::move(target)});
        }
    } else {
        for (const FunctionEntry& entry : enabled) {
            FunctionLabel label{entry.assignments, entry.requirement};
            State target = apply_asgmts(state, entry.assignments);
            out.push_back(Trans{state, TransLabel(std::move(label)), std::move(target)});
        }
    }
    return out;
}

EDfrs build_tr(const SDfrs& model, const InputDomains& domains, std::uint64_t bound,
               std::int64_t step) {
    CheckReport report = check_sdfrs(model);
    if (!report.ok())
        throw Error(Error::Kind::inconsistent_model,
                    "cannot expand an inconsistent model:\n" + report.to_string());

    EDfrs result;
    result.variables = model.variables;
    result.initial = model.initial;

    std::deque<State> worklist{model.initial};
    std::unordered_set<State, StateHash> visited;

    for (std::uint64_t iteration = 0; iteration < bound && !worklist.empty(); ++iteration) {
        State head = std::move(worklist.front());
        worklist.pop_front();
        if (visited.count(head)) continue;
        std::vector<Trans> transitions = gen_transitions(head, model, domains, step);
        visited.insert(std::move(head));
        for (Trans& t : transitions) {
            if (!visited.count(t.target)) worklist.push_back(t.target);
            result.transitions.push_back(std::move(t));
        }
    }

    // State table: initial plus every transition endpoint, discovery order.
    std::unordered_set<State, StateHash> seen;
    auto record = [&](const State& s) {
        if (seen.insert(s).second) result.states.push_back(s);
    };
    record(result.initial);
    for (const Trans& t : result.transitions) {
        record(t.source);
        record(t.target);
    }
    return result;
}

namespace {

void check_tr_structural(const EDfrs& e, CheckReport& report) {
    auto add = [&](const std::string& where, const std::string& message) {
        report.violations.push_back({RuleFamily::state, where, message});
    };
    std::unordered_set<State, StateHash> members(e.states.begin(), e.states.end());
    if (!members.count(e.initial)) add("initial", "initial state is not in the state set");

    std::unordered_set<State, StateHash> delay_sources;
    std::unordered_set<State, StateHash> function_sources;

    const std::string& clock = e.variables.clock.name;
    for (std::size_t i = 0; i < e.transitions.size(); ++i) {
        const Trans& t = e.transitions[i];
        std::string where = "transition " + std::to_string(i);
        if (!members.count(t.source)) add(where, "source state is not in the state set");
        if (!members.count(t.target)) add(where, "target state is not in the state set");
        try {
            if (const auto* f = std::get_if<FunctionLabel>(&t.label)) {
                function_sources.insert(t.source);
                if (!(t.source.at(clock) == t.target.at(clock)))
                    add(where, "function transition changes the global clock");
                State expected = apply_asgmts(t.source, f->assignments);
                if (!(expected == t.target))
                    add(where, "function transition target does not match its assignments");
            } else {
                const auto& d = std::get<DelayLabel>(t.label);
                delay_sources.insert(t.source);
                const ValuePair& src_gc = t.source.at(clock);
                const ValuePair& dst_gc = t.target.at(clock);
                if (dst_gc.current.as_int() != src_gc.current.as_int() + d.delta)
                    add(where, "delay transition does not advance the clock by its delta");
                if (!(dst_gc.previous == src_gc.current))
                    add(where, "delay transition does not age the clock pair");
                State expected = delay_target(t.source, d, clock);
                if (!(expected == t.target))
                    add(where, "delay transition touches more than inputs and the clock");
            }
        } catch (const Error& err) {
            add(where, err.what());
        }
    }
    for (const State& s : delay_sources) {
        if (function_sources.count(s))
            report.violations.push_back(
                {RuleFamily::state, "state " + std::to_string(s.hash()),
                 "state has both delay and function successors"});
    }
}

} // namespace

CheckReport check_tr(const EDfrs& e) {
    CheckReport report;
    check_tr_structural(e, report);
    return report;
}

CheckReport check_tr(const EDfrs& e, const SDfrs& model) {
    CheckReport report;
    check_tr_structural(e, report);
    for (std::size_t i = 0; i < e.transitions.size(); ++i) {
        const Trans& t = e.transitions[i];
        std::string where = "transition " + std::to_string(i);
        bool stable = is_stable(t.source, model);
        if (std::holds_alternative<DelayLabel>(t.label) && !stable)
            report.violations.push_back(
                {RuleFamily::state, where, "delay transition leaves an unstable state"});
        if (std::holds_alternative<FunctionLabel>(t.label) && stable)
            report.violations.push_back(
                {RuleFamily::state, where, "function transition leaves a stable state"});
    }
    return report;
}

namespace {

// Depth-limited walk over reaction alternatives; true iff every chain reaches
// a stable state within the remaining budget. A state revisited along the
// current chain is a reaction cycle and fails immediately.
bool settles(const State& state, const SDfrs& model, std::size_t remaining,
             std::vector<State>& chain) {
    std::vector<FunctionEntry> enabled = enabled_entries(state, model);
    if (enabled.empty()) return true;
    if (remaining == 0) return false;
    if (std::find(chain.begin(), chain.end(), state) != chain.end()) return false;
    chain.push_back(state);
    bool ok = std::all_of(enabled.begin(), enabled.end(), [&](const FunctionEntry& entry) {
        return settles(apply_asgmts(state, entry.assignments), model, remaining - 1, chain);
    });
    chain.pop_back();
    return ok;
}

} // namespace

LintReport lint_model(const SDfrs& model, const InputDomains& domains, std::int64_t step,
                      std::uint64_t bound, std::size_t chain_bound) {
    LintReport report;
    EDfrs expansion = build_tr(model, domains, bound, step);
    for (const State& s : expansion.states) {
        std::vector<FunctionEntry> enabled = enabled_entries(s, model);
        if (enabled.empty()) continue;
        std::vector<State> chain;
        if (!settles(s, model, chain_bound, chain))
            report.findings.push_back(
                {"reaction-livelock", s,
                 "reactions do not settle within " + std::to_string(chain_bound) + " steps"});
        for (const auto& component : model.functions.components) {
            std::vector<std::string> hits;
            for (const FunctionEntry& entry : component) {
                if (eval_cnf(s, entry.static_guard) && eval_cnf(s, entry.timed_guard))
                    hits.push_back(entry.requirement);
            }
            if (hits.size() > 1) {
                std::string detail = "entries enabled together:";
                for (const std::string& r : hits) detail += " " + r;
                report.findings.push_back({"overlapping-entries", s, detail});
            }
        }
    }
    return report;
}

std::string label_canonical(const TransLabel& label) {
    std::string out;
    if (const auto* d = std::get_if<DelayLabel>(&label)) {
        out = "delay " + std::to_string(d->delta);
        for (const Asgmt& a : d->input_assignments)
            out += " " + a.target + ":=" + a.value->to_string();
    } else {
        const auto& f = std::get<FunctionLabel>(label);
        out = "func " + f.requirement;
        for (const Asgmt& a : f.assignments)
            out += " " + a.target + ":=" + (a.is_reset() ? "reset" : a.value->to_string());
    }
    return out;
}

std::string trans_canonical(const Trans& t) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(t.source.hash()));
    std::string out = buf;
    out += " [" + label_canonical(t.label) + "] ";
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(t.target.hash()));
    out += buf;
    return out;
}

std::string edfrs_to_text(const EDfrs& e) {
    std::string out = "states " + std::to_string(e.states.size()) + "\n";
    char buf[40];
    for (const State& s : e.states) {
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(s.hash()));
        out += std::string(buf) + " " + s.canonical() + "\n";
    }
    out += "transitions " + std::to_string(e.transitions.size()) + "\n";
    for (const Trans& t : e.transitions) out += trans_canonical(t) + "\n";
    return out;
}

std::string edfrs_to_dot(const EDfrs& e) {
    std::string out = "digraph edfrs {\n  rankdir=LR;\n  node [shape=box, fontname=\"monospace\"];\n";
    char buf[40];
    for (const State& s : e.states) {
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(s.hash()));
        std::string label;
        for (const auto& [name, pair] : s.entries()) {
            label += name + " = " + pair.current.to_string() + "\\n";
        }
        out += "  \"" + std::string(buf) + "\" [label=\"" + label + "\"";
        if (s == e.initial) out += ", penwidth=2";
        out += "];\n";
    }
    for (const Trans& t : e.transitions) {
        char src[40], dst[40];
        std::snprintf(src, sizeof src, "%016llx",
                      static_cast<unsigned long long>(t.source.hash()));
        std::snprintf(dst, sizeof dst, "%016llx",
                      static_cast<unsigned long long>(t.target.hash()));
        out += "  \"" + std::string(src) + "\" -> \"" + dst + "\" [label=\"" +
               label_canonical(t.label) + "\"];\n";
    }
    out += "}\n";
    return out;
}

} // namespace dfrs
