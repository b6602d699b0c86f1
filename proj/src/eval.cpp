#include "dfrs/eval.hpp"

#include <algorithm>

namespace dfrs {

namespace {

bool compare(const Value& lhs, CmpOp op, const Value& rhs) {
    if (lhs.type() != rhs.type())
        throw Error(Error::Kind::tag_mismatch,
                    "cannot compare " + type_name(lhs.type()) + " against " +
                        type_name(rhs.type()));
    switch (op) {
    case CmpOp::eq: return lhs == rhs;
    case CmpOp::neq: return !(lhs == rhs);
    default: break;
    }
    if (!lhs.is_numeric())
        throw Error(Error::Kind::tag_mismatch,
                    "ordering comparison requires numeric operands");
    std::int64_t a = lhs.as_int();
    std::int64_t b = rhs.as_int();
    switch (op) {
    case CmpOp::lt: return a < b;
    case CmpOp::le: return a <= b;
    case CmpOp::gt: return a > b;
    case CmpOp::ge: return a >= b;
    default: return false; // unreachable
    }
}

Value elapsed_since(const State& state, const std::string& timer) {
    const Value& clock = state.at(kClockName).current;
    const Value& snapshot = state.at(timer).current;
    if (clock.type() != Type::natural || snapshot.type() != Type::natural)
        throw Error(Error::Kind::tag_mismatch,
                    "elapsed-time condition needs natural clock and timer");
    std::int64_t diff = clock.as_int() - snapshot.as_int();
    // Natural subtraction truncates at zero.
    return Value::natural(diff > 0 ? diff : 0);
}

} // namespace

bool eval_bexp(const State& state, const BExp& e) {
    if (e.side == Side::elapsed) return compare(elapsed_since(state, e.var), e.op, e.rhs);
    const ValuePair& pair = state.at(e.var);
    const Value& lhs = e.side == Side::previous ? pair.previous : pair.current;
    return compare(lhs, e.op, e.rhs);
}

bool eval_cnf(const State& state, const Cnf& guard) {
    return std::all_of(guard.clauses.begin(), guard.clauses.end(), [&](const Disj& d) {
        return std::any_of(d.atoms.begin(), d.atoms.end(),
                           [&](const BExp& atom) { return eval_bexp(state, atom); });
    });
}

State apply_asgmts(const State& state, const std::vector<Asgmt>& assignments) {
    State result = state;
    for (const Asgmt& a : assignments) {
        const ValuePair& old = result.at(a.target);
        Value next = a.is_reset() ? result.at(kClockName).current : *a.value;
        if (next.type() != old.current.type())
            throw Error(Error::Kind::tag_mismatch,
                        "assignment to '" + a.target + "' changes its tag");
        result.set(a.target, ValuePair{old.current, next});
    }
    return result;
}

} // namespace dfrs
