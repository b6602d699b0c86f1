#include "dfrs/value.hpp"

namespace dfrs {

std::string type_name(Type t) {
    switch (t) {
    case Type::boolean: return "boolean";
    case Type::integer: return "integer";
    case Type::natural: return "natural";
    }
    return "?";
}

Type type_from_name(const std::string& name) {
    if (name == "boolean") return Type::boolean;
    if (name == "integer") return Type::integer;
    if (name == "natural") return Type::natural;
    throw Error(Error::Kind::invalid_value, "unknown type name: " + name);
}

std::string Value::to_string() const {
    if (type_ == Type::boolean) return payload_ != 0 ? "true" : "false";
    return std::to_string(payload_);
}

std::string Value::tagged_string() const {
    switch (type_) {
    case Type::boolean: return std::string("b:") + (payload_ != 0 ? "true" : "false");
    case Type::integer: return "i:" + std::to_string(payload_);
    case Type::natural: return "n:" + std::to_string(payload_);
    }
    return "?";
}

} // namespace dfrs
