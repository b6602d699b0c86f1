#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "dfrs/check.hpp"
#include "dfrs/model.hpp"

namespace dfrs {

/// Label of a delay transition: time advances by delta while every input
/// receives a (possibly unchanged) value.
struct DelayLabel {
    std::int64_t delta = 1;
    std::vector<Asgmt> input_assignments;

    bool operator==(const DelayLabel&) const = default;
};

/// Label of a function transition: an instantaneous system reaction carrying
/// the fired entry's assignments and requirement id. Time does not evolve.
struct FunctionLabel {
    std::vector<Asgmt> assignments;
    std::string requirement;

    bool operator==(const FunctionLabel&) const = default;
};

using TransLabel = std::variant<DelayLabel, FunctionLabel>;

struct Trans {
    State source;
    TransLabel label;
    State target;

    bool operator==(const Trans&) const = default;
};

/// Expanded model: the states reached from the initial one within some bound,
/// together with the transition relation that connects them.
struct EDfrs {
    DfrsVariables variables;
    std::vector<State> states; // discovery order, no duplicates
    State initial;
    std::vector<Trans> transitions;
};

/// Entries (across all components, in declaration order) whose static and
/// timed guards both hold on the state.
std::vector<FunctionEntry> enabled_entries(const State& state, const SDfrs& model);

/// A state is stable when no entry is enabled; only delay transitions may
/// leave it.
bool is_stable(const State& state, const SDfrs& model);

/// Cartesian product of the input domains. Each element assigns every input
/// exactly once; inputs iterate in declaration order and domain values in
/// declared order, so the first combination picks every domain's first value.
/// Throws Error(empty_domain) if some input has no possible value.
std::vector<std::vector<Asgmt>> input_combinations(const InputDomains& domains);

/// Transitions leaving the state: one delay per input combination when the
/// state is stable, otherwise one function transition per enabled entry
/// (reactions preempt delays).
std::vector<Trans> gen_transitions(const State& state, const SDfrs& model,
                                   const InputDomains& domains, std::int64_t step);

/// Bounded worklist expansion seeded with the initial state. Each iteration
/// pops the worklist head, skips it when already visited, and otherwise
/// appends its transitions and enqueues the unvisited targets. The bound
/// counts iterations (head pops), not states or depth.
///
/// Visited-state equality covers the whole state including the global clock,
/// so revisiting a configuration at a later time is never pruned: termination
/// comes from the bound alone, and generous bounds on models with live clocks
/// produce large expansions.
///
/// Throws Error(inconsistent_model) unless check_sdfrs(model) is empty.
EDfrs build_tr(const SDfrs& model, const InputDomains& domains, std::uint64_t bound,
               std::int64_t step);

/// Structural consistency of an expanded model: endpoint membership, clock
/// constancy on function labels, clock advance and input handling on delay
/// labels, and no state mixing delay and function successors.
CheckReport check_tr(const EDfrs& e);

/// As above, plus guard-based stability discipline: delay transitions must
/// leave stable states and function transitions unstable ones, judged against
/// the symbolic model.
CheckReport check_tr(const EDfrs& e, const SDfrs& model);

struct LintFinding {
    std::string kind; // "reaction-livelock" or "overlapping-entries"
    State state;
    std::string detail;
};

struct LintReport {
    std::vector<LintFinding> findings;

    bool ok() const { return findings.empty(); }
};

/// Per-model lint over a bounded expansion: reports unstable states whose
/// reaction chains do not reach stability within chain_bound function steps,
/// and states where several entries of one component are enabled at once.
LintReport lint_model(const SDfrs& model, const InputDomains& domains, std::int64_t step,
                      std::uint64_t bound, std::size_t chain_bound = 16);

std::string label_canonical(const TransLabel& label);
std::string trans_canonical(const Trans& t);

/// Newline-delimited canonical dump: a state table (hash and canonical form,
/// discovery order) followed by one line per transition.
std::string edfrs_to_text(const EDfrs& e);

/// Graphviz rendering for external viewers.
std::string edfrs_to_dot(const EDfrs& e);

} // namespace dfrs
