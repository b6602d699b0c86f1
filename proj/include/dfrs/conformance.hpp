#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dfrs/model.hpp"
#include "dfrs/tracegen.hpp"

namespace dfrs {

/// How to launch and talk to a system under test. The wire protocol is
/// line-based: for each table row the runner writes one stimulus line
/// "<time> <v1> <v2> ..." (inputs in declaration order, booleans as 0/1,
/// integers in decimal) and expects one response line "<o1> <o2> ..."
/// (outputs, same encoding) within the per-step timeout.
struct SutSession {
    std::string command;
    std::vector<std::string> args;
    int timeout_ms = 1000;
};

struct RunVerdict {
    enum class Kind { pass, fail, inconclusive };

    Kind kind = Kind::pass;
    std::size_t row = 0;      // set on fail
    std::string column;       // set on fail
    std::string expected;     // set on fail
    std::string actual;       // set on fail
    std::string reason;       // set on inconclusive

    bool passed() const { return kind == Kind::pass; }
    std::string to_string() const;
};

/// Feeds the table's stimuli to a freshly launched SUT process and compares
/// each response against the expected outputs. The first divergence fails;
/// launch errors, timeouts and malformed responses are inconclusive. A pass
/// requires clean EOF from the SUT after the last row.
RunVerdict run_trace_against_sut(const TestDataTable& table, const SutSession& session);

enum class MutationOperator {
    guard_op_flip,          // eq<->neq, lt<->ge, gt<->le
    guard_constant_perturb, // numeric guard constant +1 or -1
    assignment_value_swap,  // another value drawn from the variable's pool
    atom_side_swap,         // prev <-> curr
    entry_delete,
};

std::string mutation_operator_name(MutationOperator op);

/// One model-level mutation: an operator applied at a location. Atom indices
/// count through the static guard's atoms first, then the timed guard's.
struct Mutant {
    std::string id;
    MutationOperator op = MutationOperator::guard_op_flip;
    std::size_t component = 0;
    std::size_t entry = 0;
    std::size_t index = 0; // atom or assignment index; unused for entry_delete
    int detail = 0;        // +1/-1 for constant perturbation

    bool operator==(const Mutant&) const = default;
};

struct MutantSet {
    std::vector<Mutant> mutants; // well-formed survivors of generation
    std::size_t attempted = 0;   // every (operator, location) candidate
    std::size_t discarded = 0;   // candidates whose result broke check_sdfrs
};

/// Applies the mutant's operator to a copy of the model.
SDfrs apply_mutant(const SDfrs& model, const Mutant& m);

/// Systematic enumeration over all applicable (operator, location) pairs;
/// ill-formed results are discarded and counted. The surviving list is
/// shuffled with the seed and truncated to max.
MutantSet generate_mutants(const SDfrs& model, std::uint64_t seed, std::size_t max);

struct MutationReport {
    std::size_t total = 0;     // attempted candidates
    std::size_t discarded = 0; // ill-formed, excluded from the score
    std::size_t killed = 0;
    std::vector<std::string> survivors;
    double score = 0.0; // killed / (total - discarded)

    std::string to_string() const;
};

/// True iff some trace in the suite distinguishes the variant from the
/// original model: expected tables are derived under the original and the
/// variant is simulated against the same stimuli. A variant whose reactions
/// fail to settle counts as distinguished.
bool suite_kills(const Model& original, const SDfrs& variant, const std::vector<Trace>& suite);

/// Runs every mutant against the suite. Surviving mutants are conservatively
/// counted as non-equivalent.
MutationReport mutation_score(const Model& model, const MutantSet& mutants,
                              const std::vector<Trace>& suite);

} // namespace dfrs
