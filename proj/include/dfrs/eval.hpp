#pragma once

#include <vector>

#include "dfrs/model.hpp"

namespace dfrs {

/// Evaluates an atomic condition against a state.
///
/// For prev/curr atoms the selected side of the variable's pair is compared
/// against the constant; both must carry the same tag, and ordering operators
/// require numeric operands. For elapsed atoms the left operand is
/// current(gc) - current(timer), truncated at zero, compared as a natural.
///
/// Throws Error(unknown_variable) or Error(tag_mismatch). Models that passed
/// check_sdfrs never trigger either.
bool eval_bexp(const State& state, const BExp& e);

/// Conjunction over clauses of disjunction over atoms; the empty guard is
/// true.
bool eval_cnf(const State& state, const Cnf& guard);

/// Applies assignments left to right. Each assignment moves the target's
/// current value into its previous slot and installs the assigned value
/// (reset-to-clock installs the current global clock). Every other variable,
/// including the clock, keeps its pair untouched.
State apply_asgmts(const State& state, const std::vector<Asgmt>& assignments);

} // namespace dfrs
