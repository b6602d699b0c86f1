#include "dfrs/check.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

namespace dfrs {

std::string rule_family_name(RuleFamily f) {
    switch (f) {
    case RuleFamily::vname: return "vname";
    case RuleFamily::svars: return "svars";
    case RuleFamily::disjoint: return "disjoint";
    case RuleFamily::gc_var: return "gc-var";
    case RuleFamily::timer_type: return "timer-type";
    case RuleFamily::state: return "state";
    case RuleFamily::function_rules: return "function-rules";
    case RuleFamily::references: return "references";
    case RuleFamily::types: return "types";
    }
    return "?";
}

bool CheckReport::has_family(RuleFamily f) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.family == f; });
}

std::string CheckReport::to_string() const {
    std::string out;
    for (const Violation& v : violations) {
        out += "[" + rule_family_name(v.family) + "] " + v.where + ": " + v.message + "\n";
    }
    return out;
}

bool check_vname(const std::string& name) {
    return !name.empty() && name != kClockName;
}

namespace {

class Checker {
public:
    explicit Checker(const SDfrs& model) : m_(model) {}

    CheckReport run() {
        index_declarations();
        check_names();
        check_groups();
        check_disjointness();
        check_clock();
        check_timers();
        check_initial_state();
        check_functions();
        return std::move(report_);
    }

private:
    void add(RuleFamily f, std::string where, std::string message) {
        report_.violations.push_back({f, std::move(where), std::move(message)});
    }

    void index_declarations() {
        for (const VarDecl& d : m_.variables.inputs) declared_.emplace(d.name, d.type);
        for (const VarDecl& d : m_.variables.outputs) declared_.emplace(d.name, d.type);
        for (const VarDecl& d : m_.variables.timers) declared_.emplace(d.name, d.type);
    }

    std::optional<Type> declared_type(const std::string& name) const {
        auto it = declared_.find(name);
        if (it == declared_.end()) return std::nullopt;
        return it->second;
    }

    bool is_kind(const std::vector<VarDecl>& group, const std::string& name) const {
        return std::any_of(group.begin(), group.end(),
                           [&](const VarDecl& d) { return d.name == name; });
    }

    void check_names() {
        auto scan = [&](const std::vector<VarDecl>& group, const char* kind) {
            for (const VarDecl& d : group) {
                if (!check_vname(d.name))
                    add(RuleFamily::vname, std::string(kind) + " '" + d.name + "'",
                        d.name.empty() ? "variable name is empty"
                                       : "variable uses the reserved clock name");
            }
        };
        scan(m_.variables.inputs, "input");
        scan(m_.variables.outputs, "output");
        scan(m_.variables.timers, "timer");
    }

    void check_groups() {
        auto scan = [&](const std::vector<VarDecl>& group, const char* kind, bool must_be_nonempty) {
            if (must_be_nonempty && group.empty())
                add(RuleFamily::svars, kind, "declaration list is empty");
            std::set<std::string> seen;
            for (const VarDecl& d : group) {
                if (!seen.insert(d.name).second)
                    add(RuleFamily::svars, std::string(kind) + " '" + d.name + "'",
                        "name declared more than once");
            }
        };
        scan(m_.variables.inputs, "inputs", true);
        scan(m_.variables.outputs, "outputs", true);
        scan(m_.variables.timers, "timers", false);
    }

    void check_disjointness() {
        auto names = [](const std::vector<VarDecl>& group) {
            std::set<std::string> s;
            for (const VarDecl& d : group) s.insert(d.name);
            return s;
        };
        const auto in = names(m_.variables.inputs);
        const auto out = names(m_.variables.outputs);
        const auto tim = names(m_.variables.timers);
        auto overlap = [&](const std::set<std::string>& a, const std::set<std::string>& b,
                           const char* what) {
            for (const std::string& n : a) {
                if (b.count(n))
                    add(RuleFamily::disjoint, "'" + n + "'",
                        std::string("declared as both ") + what);
            }
        };
        overlap(in, out, "input and output");
        overlap(in, tim, "input and timer");
        overlap(out, tim, "output and timer");
    }

    void check_clock() {
        if (m_.variables.clock.name != kClockName)
            add(RuleFamily::gc_var, "'" + m_.variables.clock.name + "'",
                "global clock must be named 'gc'");
        if (m_.variables.clock.type != Type::natural)
            add(RuleFamily::gc_var, "'" + m_.variables.clock.name + "'",
                "global clock must be natural");
    }

    void check_timers() {
        for (const VarDecl& d : m_.variables.timers) {
            if (d.type != m_.variables.clock.type)
                add(RuleFamily::timer_type, "timer '" + d.name + "'",
                    "timers must share the clock's type (" +
                        type_name(m_.variables.clock.type) + ")");
        }
    }

    void check_initial_state() {
        std::map<std::string, Type> expected = declared_;
        expected.emplace(m_.variables.clock.name, m_.variables.clock.type);

        std::set<std::string> seen;
        for (const auto& [name, pair] : m_.initial.entries()) {
            if (!seen.insert(name).second) {
                add(RuleFamily::state, "'" + name + "'",
                    "initial state lists the variable more than once");
                continue;
            }
            auto it = expected.find(name);
            if (it == expected.end()) {
                add(RuleFamily::state, "'" + name + "'",
                    "initial state covers an undeclared variable");
                continue;
            }
            if (pair.previous.type() != it->second || pair.current.type() != it->second)
                add(RuleFamily::state, "'" + name + "'",
                    "initial pair does not match the declared type " + type_name(it->second));
        }
        for (const auto& [name, type] : expected) {
            (void)type;
            if (!seen.count(name))
                add(RuleFamily::state, "'" + name + "'",
                    "initial state provides no value for the variable");
        }
    }

    void check_atom(const BExp& atom, bool timed_guard, const std::string& where) {
        if (atom.side == Side::elapsed) {
            if (!timed_guard) {
                add(RuleFamily::references, where,
                    "elapsed-time atom appears in a static guard");
                return;
            }
            if (!is_kind(m_.variables.timers, atom.var)) {
                add(RuleFamily::references, where,
                    "elapsed-time atom over '" + atom.var + "', which is not a timer");
                return;
            }
            if (atom.rhs.type() != Type::natural)
                add(RuleFamily::types, where,
                    "elapsed-time atom must compare against a natural");
            return;
        }
        if (timed_guard) {
            add(RuleFamily::references, where,
                "timed guards may only contain elapsed-time atoms over timers");
            return;
        }
        if (!is_kind(m_.variables.inputs, atom.var) && !is_kind(m_.variables.outputs, atom.var)) {
            add(RuleFamily::references, where,
                "static guard references '" + atom.var + "', which is not an input or output");
            return;
        }
        Type decl = *declared_type(atom.var);
        if (atom.rhs.type() != decl) {
            add(RuleFamily::types, where,
                "'" + atom.var + "' is " + type_name(decl) + " but is compared against " +
                    type_name(atom.rhs.type()));
            return;
        }
        if (atom.op != CmpOp::eq && atom.op != CmpOp::neq && decl == Type::boolean)
            add(RuleFamily::types, where, "ordering comparison over boolean '" + atom.var + "'");
    }

    void check_guard(const Cnf& guard, bool timed, const std::string& where) {
        for (std::size_t c = 0; c < guard.clauses.size(); ++c) {
            const Disj& d = guard.clauses[c];
            std::string at = where + " clause " + std::to_string(c);
            if (d.atoms.empty()) {
                add(RuleFamily::function_rules, at, "disjunctive clause has no atoms");
                continue;
            }
            for (const BExp& atom : d.atoms) check_atom(atom, timed, at);
        }
    }

    void check_assignment(const Asgmt& a, const std::string& where) {
        bool output = is_kind(m_.variables.outputs, a.target);
        bool timer = is_kind(m_.variables.timers, a.target);
        if (!output && !timer) {
            add(RuleFamily::references, where,
                "assignment targets '" + a.target + "', which is not an output or timer");
            return;
        }
        if (a.is_reset()) {
            if (!timer)
                add(RuleFamily::references, where,
                    "reset-to-clock targets '" + a.target + "', which is not a timer");
            return;
        }
        Type decl = *declared_type(a.target);
        if (a.value->type() != decl)
            add(RuleFamily::types, where,
                "'" + a.target + "' is " + type_name(decl) + " but is assigned " +
                    type_name(a.value->type()));
    }

    void check_functions() {
        if (m_.functions.components.empty()) {
            add(RuleFamily::function_rules, "functions", "the function list is empty");
            return;
        }
        for (std::size_t c = 0; c < m_.functions.components.size(); ++c) {
            for (std::size_t e = 0; e < m_.functions.components[c].size(); ++e) {
                const FunctionEntry& entry = m_.functions.components[c][e];
                std::string where = entry.requirement.empty()
                                        ? "component " + std::to_string(c) + " entry " +
                                              std::to_string(e)
                                        : entry.requirement;
                if (entry.static_guard.empty() && entry.timed_guard.empty())
                    add(RuleFamily::function_rules, where,
                        "static and timed guards cannot both be empty");
                if (entry.assignments.empty())
                    add(RuleFamily::function_rules, where, "entry has no assignments");
                check_guard(entry.static_guard, false, where + " static guard");
                check_guard(entry.timed_guard, true, where + " timed guard");
                for (const Asgmt& a : entry.assignments) check_assignment(a, where);
            }
        }
    }

    const SDfrs& m_;
    CheckReport report_;
    std::map<std::string, Type> declared_;
};

} // namespace

CheckReport check_sdfrs(const SDfrs& model) { return Checker(model).run(); }

} // namespace dfrs
