#pragma once

#include <string>
#include <vector>

#include "dfrs/model.hpp"

namespace dfrs {

/// Families of consistency rules enforced over a symbolic model. check_sdfrs
/// reports one violation per broken rule instance, tagged with its family.
enum class RuleFamily {
    vname,          // variable names are non-empty and never "gc"
    svars,          // inputs/outputs non-empty; names within a group distinct
    disjoint,       // input, output and timer name sets pairwise disjoint
    gc_var,         // global clock is named "gc" and typed natural
    timer_type,     // timers share the clock's type (natural)
    state,          // initial state covers exactly the system variables,
                    // with both pair members tagged per the declaration
    function_rules, // function list non-empty; per entry: guards not both
                    // empty, assignments non-empty
    references,     // guards and assignments only touch declared variables of
                    // the permitted kind
    types,          // comparisons and assignments are tag-consistent
};

std::string rule_family_name(RuleFamily f);

struct Violation {
    RuleFamily family;
    std::string where;   // offending element, e.g. a variable or requirement id
    std::string message;

    bool operator==(const Violation&) const = default;
};

struct CheckReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool has_family(RuleFamily f) const;
    std::string to_string() const;
};

/// True iff the name is usable for a system variable: non-empty and distinct
/// from the reserved clock name.
bool check_vname(const std::string& name);

/// Runs every consistency rule over the model and reports all violations.
/// Violations are data, not failures; an empty report means consistent.
CheckReport check_sdfrs(const SDfrs& model);

} // namespace dfrs
