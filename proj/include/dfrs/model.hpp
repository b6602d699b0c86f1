#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dfrs/value.hpp"

namespace dfrs {

/// Reserved name of the system global clock.
inline constexpr std::string_view kClockName = "gc";

/// A declared system variable: name and value domain.
struct VarDecl {
    std::string name;
    Type type = Type::boolean;

    bool operator==(const VarDecl&) const = default;
};

/// The (previous, current) value pair every state keeps per variable.
struct ValuePair {
    Value previous;
    Value current;

    bool operator==(const ValuePair&) const = default;
};

/// A state maps each system variable (inputs, outputs, timers and the global
/// clock) to its previous/current value pair. Entry order is preserved; two
/// states are equal only if they list the same entries in the same order,
/// which is how states produced from one model always come out.
class State {
public:
    using Entry = std::pair<std::string, ValuePair>;

    State() = default;
    explicit State(std::vector<Entry> entries) : entries_(std::move(entries)) {}

    void push_back(std::string name, ValuePair pair) {
        entries_.emplace_back(std::move(name), std::move(pair));
    }

    bool contains(std::string_view name) const;

    /// Throws Error(unknown_variable) if the name is absent.
    const ValuePair& at(std::string_view name) const;

    /// Replaces an existing entry's pair; throws if the name is absent.
    void set(std::string_view name, ValuePair pair);

    const std::vector<Entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

    bool operator==(const State&) const = default;

    /// "name=(b:false,b:true);...", the canonical line used by exports and
    /// state hashing.
    std::string canonical() const;
    std::uint64_t hash() const;

private:
    std::vector<Entry> entries_;
};

struct StateHash {
    std::size_t operator()(const State& s) const { return static_cast<std::size_t>(s.hash()); }
};

/// Which side of a variable's pair an atom inspects. `elapsed` denotes the
/// timed form: current(gc) minus current(timer), compared as a natural.
enum class Side { previous, current, elapsed };

enum class CmpOp { eq, neq, lt, le, gt, ge };

std::string side_name(Side s);
Side side_from_name(const std::string& name);
std::string op_name(CmpOp op);
CmpOp op_from_name(const std::string& name);

/// Atomic guard condition.
struct BExp {
    Side side = Side::current;
    std::string var;
    CmpOp op = CmpOp::eq;
    Value rhs = Value::boolean(false);

    bool operator==(const BExp&) const = default;
};

/// Disjunctive clause: non-empty sequence of atoms.
struct Disj {
    std::vector<BExp> atoms;

    bool operator==(const Disj&) const = default;
};

/// Guard in conjunctive normal form. An empty clause list denotes the absent
/// guard and evaluates to true; a function entry may leave at most one of its
/// two guards absent.
struct Cnf {
    std::vector<Disj> clauses;

    bool empty() const { return clauses.empty(); }
    bool operator==(const Cnf&) const = default;
};

/// Assignment performed by a system reaction. A missing value is the
/// reset-to-clock marker: the target timer receives the current global clock.
struct Asgmt {
    std::string target;
    std::optional<Value> value;

    bool is_reset() const { return !value.has_value(); }
    bool operator==(const Asgmt&) const = default;
};

/// One behaviour rule: fire the assignments when both guards hold, keeping
/// the identifier of the requirement the rule came from.
struct FunctionEntry {
    Cnf static_guard;
    Cnf timed_guard;
    std::vector<Asgmt> assignments;
    std::string requirement;

    bool operator==(const FunctionEntry&) const = default;
};

/// Behaviour of the whole system: one entry list per concurrent component.
struct DfrsFunctions {
    std::vector<std::vector<FunctionEntry>> components;

    bool operator==(const DfrsFunctions&) const = default;
};

/// Input, output and timer declarations plus the global clock variable.
struct DfrsVariables {
    std::vector<VarDecl> inputs;
    std::vector<VarDecl> outputs;
    std::vector<VarDecl> timers;
    VarDecl clock{std::string(kClockName), Type::natural};

    bool operator==(const DfrsVariables&) const = default;
};

/// Symbolic model: variables, an initial state covering all of them, and the
/// behaviour functions. Consistency is checked by check_sdfrs, not enforced
/// by construction.
struct SDfrs {
    DfrsVariables variables;
    State initial;
    DfrsFunctions functions;

    bool operator==(const SDfrs&) const = default;
};

/// Possible values per input, in declaration order. A delay transition picks
/// one value per input from these.
using InputDomains = std::vector<std::pair<std::string, std::vector<Value>>>;

/// A model as loaded from a model file: the symbolic model plus the input
/// domains and the configured time step.
struct Model {
    SDfrs sdfrs;
    InputDomains domains;
    std::int64_t time_step = 1;

    bool operator==(const Model&) const = default;
};

std::uint64_t fnv1a64(std::string_view data);

} // namespace dfrs
