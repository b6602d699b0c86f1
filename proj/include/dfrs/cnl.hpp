#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dfrs/model.hpp"

namespace dfrs {

/// Requirement sentences follow a small controlled grammar:
///
///   Sentence := "When" Cond ("," "and" Cond)* "," Agent "shall" ":"
///               Action ("," Action)* "."?
///   Cond     := "the" Noun+ ( "is" ValueWord+
///                           | "changes" "to" ValueWord+
///                           | "is" CmpPhrase Number "seconds" )
///   CmpPhrase:= "greater than" | "less than" | "greater or equal"
///             | "less or equal"
///   Action   := "reset the" Noun+ | "assign" ValueWord+ "to the" Noun+
///
/// Keywords match case-insensitively. Phrases (patients, agents, values) are
/// kept verbatim and resolved against a symbol table when frames are compiled
/// into model functions.

struct ConditionRole {
    enum class Verb { is, changes };

    struct TimedModifier {
        CmpOp op = CmpOp::gt;
        std::int64_t seconds = 0;

        bool operator==(const TimedModifier&) const = default;
    };

    Verb verb = Verb::is;
    std::string patient;
    std::optional<std::string> to_value;
    std::optional<std::string> from_value; // reserved by the frame layout; the
                                           // grammar never fills it
    std::optional<TimedModifier> modifier;

    bool operator==(const ConditionRole&) const = default;
};

struct ActionRole {
    enum class Verb { assign, reset };

    Verb verb = Verb::assign;
    std::string agent;
    std::string patient;
    std::optional<std::string> to_value;

    bool operator==(const ActionRole&) const = default;
};

/// The thematic roles extracted from one requirement sentence.
struct RequirementFrame {
    std::string id;
    std::vector<ConditionRole> conditions;
    std::vector<ActionRole> actions;

    bool operator==(const RequirementFrame&) const = default;
};

class ParseError : public Error {
public:
    ParseError(std::size_t position, std::vector<std::string> expected, const std::string& found)
        : Error(Error::Kind::invalid_value, format(position, expected, found)),
          position_(position), expected_(std::move(expected)) {}

    /// Character offset of the offending token in the sentence.
    std::size_t position() const { return position_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    static std::string format(std::size_t position, const std::vector<std::string>& expected,
                              const std::string& found);

    std::size_t position_;
    std::vector<std::string> expected_;
};

class CnlError : public Error {
public:
    enum class Kind { unresolved_phrase, value_not_in_encoding, guard_empty, bad_role };

    CnlError(Kind kind, const std::string& message)
        : Error(Error::Kind::invalid_value, message), cnl_kind_(kind) {}

    Kind cnl_kind() const { return cnl_kind_; }

private:
    Kind cnl_kind_;
};

RequirementFrame parse_requirement(const std::string& sentence, const std::string& id);

/// Canonical rendering; parsing it back yields an identical frame.
std::string print_frame(const RequirementFrame& frame);

/// Resolution data for one variable phrase: the model variable it names, its
/// role and type, how word values encode into model values, and the pieces
/// needed to assemble a complete model (initial value, input domain).
struct SymbolInfo {
    enum class Role { input, output, timer };

    std::string var;
    Type type = Type::boolean;
    Role role = Role::output;
    std::vector<std::pair<std::string, Value>> encoding;
    std::optional<Value> initial;
    std::vector<Value> domain;
};

/// Phrase-to-variable table, in file order (which becomes declaration order).
struct SymbolTable {
    std::vector<std::pair<std::string, SymbolInfo>> entries;

    const SymbolInfo* find_phrase(const std::string& phrase) const;
};

/// One function entry per frame, in a single component. "is" conditions
/// become current-value atoms, "changes to" becomes the previous/current
/// two-atom encoding, timed modifiers become elapsed-time atoms, and actions
/// become assignments (reset-to-clock for "reset").
DfrsFunctions compile_frames(const std::vector<RequirementFrame>& frames,
                             const SymbolTable& symbols);

/// Full pipeline: compile the frames and attach variables, initial state and
/// input domains drawn from the symbol table.
Model assemble_model(const std::vector<RequirementFrame>& frames, const SymbolTable& symbols,
                     std::int64_t time_step = 1);

/// Requirement file: one sentence per line, optional "REQnnn:" id prefix,
/// '#' comment lines ignored. Returns (id, sentence) pairs.
std::vector<std::pair<std::string, std::string>>
load_requirements_file(const std::filesystem::path& path);

/// Symbol-table file: JSON object mapping each phrase to
/// {var, type, role, encoding, initial, domain}.
SymbolTable load_symbols_file(const std::filesystem::path& path);

} // namespace dfrs
