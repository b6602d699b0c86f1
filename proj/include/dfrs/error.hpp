#pragma once

#include <stdexcept>
#include <string>

namespace dfrs {

/// Error raised by model operations. Violations found by the consistency
/// checkers are reported as data (CheckReport), not as errors; this type
/// covers genuine failures such as evaluating a guard against a state that
/// does not contain the referenced variable.
class Error : public std::runtime_error {
public:
    enum class Kind {
        unknown_variable,
        tag_mismatch,
        invalid_value,
        empty_domain,
        dead_state,
        invalid_trace,
        inconsistent_model,
        overflow,
        io,
    };

    Error(Kind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

} // namespace dfrs
