#include "dfrs/model.hpp"

#include <algorithm>

namespace dfrs {

bool State::contains(std::string_view name) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const Entry& e) { return e.first == name; });
}

const ValuePair& State::at(std::string_view name) const {
    for (const Entry& e : entries_)
        if (e.first == name) return e.second;
    throw Error(Error::Kind::unknown_variable,
                "state has no variable named '" + std::string(name) + "'");
}

void State::set(std::string_view name, ValuePair pair) {
    for (Entry& e : entries_) {
        if (e.first == name) {
            e.second = std::move(pair);
            return;
        }
    }
    throw Error(Error::Kind::unknown_variable,
                "state has no variable named '" + std::string(name) + "'");
}

std::string State::canonical() const {
    std::string out;
    for (const Entry& e : entries_) {
        out += e.first;
        out += "=(";
        out += e.second.previous.tagged_string();
        out += ',';
        out += e.second.current.tagged_string();
        out += ");";
    }
    return out;
}

std::uint64_t State::hash() const { return fnv1a64(canonical()); }

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string side_name(Side s) {
    switch (s) {
    case Side::previous: return "prev";
    case Side::current: return "curr";
    case Side::elapsed: return "elapsed";
    }
    return "?";
}

Side side_from_name(const std::string& name) {
    if (name == "prev") return Side::previous;
    if (name == "curr") return Side::current;
    if (name == "elapsed") return Side::elapsed;
    throw Error(Error::Kind::invalid_value, "unknown side: " + name);
}

std::string op_name(CmpOp op) {
    switch (op) {
    case CmpOp::eq: return "eq";
    case CmpOp::neq: return "neq";
    case CmpOp::lt: return "lt";
    case CmpOp::le: return "le";
    case CmpOp::gt: return "gt";
    case CmpOp::ge: return "ge";
    }
    return "?";
}

CmpOp op_from_name(const std::string& name) {
    if (name == "eq") return CmpOp::eq;
    if (name == "neq") return CmpOp::neq;
    if (name == "lt") return CmpOp::lt;
    if (name == "le") return CmpOp::le;
    if (name == "gt") return CmpOp::gt;
    if (name == "ge") return CmpOp::ge;
    throw Error(Error::Kind::invalid_value, "unknown comparison operator: " + name);
}

} // namespace dfrs
