#pragma once

#include <cstdint>
#include <string>

#include "dfrs/error.hpp"

namespace dfrs {

/// The three value domains a signal may range over.
enum class Type { boolean, integer, natural };

std::string type_name(Type t);
Type type_from_name(const std::string& name);

/// A tagged scalar: the universe of signal values. Naturals are represented
/// on int64 with a non-negativity invariant enforced at construction.
/// operator== is structural (tag and payload); the evaluator enforces the
/// stricter rule that comparing values of different tags is a model error.
class Value {
public:
    static Value boolean(bool v) { return Value(Type::boolean, v ? 1 : 0); }
    static Value integer(std::int64_t v) { return Value(Type::integer, v); }
    static Value natural(std::int64_t v) {
        if (v < 0)
            throw Error(Error::Kind::invalid_value,
                        "natural value must be non-negative, got " + std::to_string(v));
        return Value(Type::natural, v);
    }

    Type type() const { return type_; }
    bool is_numeric() const { return type_ != Type::boolean; }

    bool as_bool() const {
        if (type_ != Type::boolean)
            throw Error(Error::Kind::tag_mismatch, "value is not a boolean");
        return payload_ != 0;
    }

    std::int64_t as_int() const {
        if (type_ == Type::boolean)
            throw Error(Error::Kind::tag_mismatch, "value is not numeric");
        return payload_;
    }

    bool operator==(const Value& other) const = default;

    /// Plain rendering: "true", "-3", "7". Used by the tabular exports.
    std::string to_string() const;
    /// Tag-qualified rendering: "b:true", "i:-3", "n:7". Used by the
    /// canonical state serialization, where tags must be visible.
    std::string tagged_string() const;

private:
    Value(Type t, std::int64_t payload) : type_(t), payload_(payload) {}

    Type type_;
    std::int64_t payload_;
};

} // namespace dfrs
