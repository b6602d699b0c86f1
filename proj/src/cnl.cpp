#include "dfrs/cnl.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "dfrs/model_io.hpp"

namespace dfrs {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool ci_equal(const std::string& a, const std::string& b) { return lower(a) == lower(b); }

struct Token {
    std::string text;
    std::size_t position; // character offset in the sentence
};

std::vector<Token> tokenize(const std::string& sentence) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < sentence.size()) {
        char c = sentence[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == ',' || c == ':' || c == '.') {
            tokens.push_back({std::string(1, c), i});
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < sentence.size() && !std::isspace(static_cast<unsigned char>(sentence[i])) &&
               sentence[i] != ',' && sentence[i] != ':' && sentence[i] != '.')
            ++i;
        tokens.push_back({sentence.substr(start, i - start), start});
    }
    return tokens;
}

class Parser {
public:
    Parser(const std::string& sentence, std::string id)
        : sentence_(sentence), tokens_(tokenize(sentence)), id_(std::move(id)) {}

    RequirementFrame parse() {
        RequirementFrame frame;
        frame.id = id_;
        expect_keyword("when");
        frame.conditions.push_back(parse_condition());
        expect_punct(",");
        while (peek_is_keyword("and")) {
            ++pos_;
            frame.conditions.push_back(parse_condition());
            expect_punct(",");
        }
        std::string agent = collect_until_keyword("shall", "agent phrase");
        expect_keyword("shall");
        expect_punct(":");
        frame.actions.push_back(parse_action(agent));
        while (peek_is_punct(",")) {
            ++pos_;
            frame.actions.push_back(parse_action(agent));
        }
        if (peek_is_punct(".")) ++pos_;
        if (pos_ != tokens_.size()) fail({"end of sentence"});
        return frame;
    }

private:
    [[noreturn]] void fail(std::vector<std::string> expected) {
        std::size_t position = pos_ < tokens_.size() ? tokens_[pos_].position : sentence_.size();
        std::string found = pos_ < tokens_.size() ? tokens_[pos_].text : "end of sentence";
        throw ParseError(position, std::move(expected), found);
    }

    bool peek_is_keyword(const std::string& kw) const {
        return pos_ < tokens_.size() && ci_equal(tokens_[pos_].text, kw);
    }

    bool peek_is_punct(const std::string& p) const {
        return pos_ < tokens_.size() && tokens_[pos_].text == p;
    }

    bool peek_is_any_punct() const {
        if (pos_ >= tokens_.size()) return false;
        const std::string& t = tokens_[pos_].text;
        return t == "," || t == ":" || t == ".";
    }

    void expect_keyword(const std::string& kw) {
        if (!peek_is_keyword(kw)) fail({kw});
        ++pos_;
    }

    void expect_punct(const std::string& p) {
        if (!peek_is_punct(p)) fail({p});
        ++pos_;
    }

    std::string collect_until_keyword(const std::string& kw, const std::string& what) {
        std::string phrase;
        while (pos_ < tokens_.size() && !peek_is_keyword(kw) && !peek_is_any_punct()) {
            if (!phrase.empty()) phrase += ' ';
            phrase += tokens_[pos_++].text;
        }
        if (phrase.empty()) fail({what});
        return phrase;
    }

    // Words up to (not including) any punctuation; stops before `stop_kw`
    // when given.
    std::string collect_words(const std::string& what, const std::string& stop_kw = "") {
        std::string phrase;
        while (pos_ < tokens_.size() && !peek_is_any_punct() &&
               (stop_kw.empty() || !peek_is_keyword(stop_kw))) {
            if (!phrase.empty()) phrase += ' ';
            phrase += tokens_[pos_++].text;
        }
        if (phrase.empty()) fail({what});
        return phrase;
    }

    std::string parse_patient() {
        if (!peek_is_keyword("the")) fail({"the"});
        std::string phrase = tokens_[pos_++].text;
        while (pos_ < tokens_.size() && !peek_is_any_punct() && !peek_is_keyword("is") &&
               !peek_is_keyword("changes")) {
            phrase += ' ';
            phrase += tokens_[pos_++].text;
        }
        if (phrase.find(' ') == std::string::npos) fail({"variable phrase"});
        return phrase;
    }

    std::int64_t parse_number() {
        if (pos_ >= tokens_.size()) fail({"number"});
        const std::string& t = tokens_[pos_].text;
        if (t.empty() || !std::all_of(t.begin(), t.end(), [](unsigned char c) {
                return std::isdigit(c);
            }))
            fail({"number"});
        ++pos_;
        return std::stoll(t);
    }

    ConditionRole::TimedModifier parse_timed_modifier() {
        ConditionRole::TimedModifier mod;
        bool greater = peek_is_keyword("greater");
        ++pos_;
        if (peek_is_keyword("than")) {
            ++pos_;
            mod.op = greater ? CmpOp::gt : CmpOp::lt;
        } else if (peek_is_keyword("or")) {
            ++pos_;
            expect_keyword("equal");
            mod.op = greater ? CmpOp::ge : CmpOp::le;
        } else {
            fail({"than", "or equal"});
        }
        mod.seconds = parse_number();
        expect_keyword("seconds");
        return mod;
    }

    ConditionRole parse_condition() {
        ConditionRole cond;
        cond.patient = parse_patient();
        if (peek_is_keyword("is")) {
            ++pos_;
            cond.verb = ConditionRole::Verb::is;
            if (peek_is_keyword("greater") || peek_is_keyword("less"))
                cond.modifier = parse_timed_modifier();
            else
                cond.to_value = collect_words("value phrase");
        } else if (peek_is_keyword("changes")) {
            ++pos_;
            cond.verb = ConditionRole::Verb::changes;
            expect_keyword("to");
            cond.to_value = collect_words("value phrase");
        } else {
            fail({"is", "changes"});
        }
        return cond;
    }

    ActionRole parse_action(const std::string& agent) {
        ActionRole action;
        action.agent = agent;
        if (peek_is_keyword("reset")) {
            ++pos_;
            action.verb = ActionRole::Verb::reset;
            action.patient = parse_patient();
        } else if (peek_is_keyword("assign")) {
            ++pos_;
            action.verb = ActionRole::Verb::assign;
            action.to_value = collect_words("value phrase", "to");
            expect_keyword("to");
            action.patient = parse_patient();
        } else {
            fail({"reset", "assign"});
        }
        return action;
    }

    const std::string& sentence_;
    std::vector<Token> tokens_;
    std::string id_;
    std::size_t pos_ = 0;
};

} // namespace

std::string ParseError::format(std::size_t position, const std::vector<std::string>& expected,
                               const std::string& found) {
    std::string msg = "parse error at offset " + std::to_string(position) + ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i > 0) msg += " | ";
        msg += "'" + expected[i] + "'";
    }
    msg += ", found '" + found + "'";
    return msg;
}

RequirementFrame parse_requirement(const std::string& sentence, const std::string& id) {
    return Parser(sentence, id).parse();
}

namespace {

std::string cmp_phrase(CmpOp op) {
    switch (op) {
    case CmpOp::gt: return "greater than";
    case CmpOp::lt: return "less than";
    case CmpOp::ge: return "greater or equal";
    case CmpOp::le: return "less or equal";
    default: return "?";
    }
}

} // namespace

std::string print_frame(const RequirementFrame& frame) {
    std::string out = "When ";
    for (std::size_t i = 0; i < frame.conditions.size(); ++i) {
        const ConditionRole& c = frame.conditions[i];
        if (i > 0) out += "and ";
        if (c.modifier)
            out += c.patient + " is " + cmp_phrase(c.modifier->op) + " " +
                   std::to_string(c.modifier->seconds) + " seconds";
        else if (c.verb == ConditionRole::Verb::is)
            out += c.patient + " is " + c.to_value.value_or("");
        else
            out += c.patient + " changes to " + c.to_value.value_or("");
        out += ", ";
    }
    out += frame.actions.empty() ? std::string("the system") : frame.actions.front().agent;
    out += " shall:";
    for (std::size_t i = 0; i < frame.actions.size(); ++i) {
        const ActionRole& a = frame.actions[i];
        out += i > 0 ? ", " : " ";
        if (a.verb == ActionRole::Verb::reset)
            out += "reset " + a.patient;
        else
            out += "assign " + a.to_value.value_or("") + " to " + a.patient;
    }
    out += ".";
    return out;
}

const SymbolInfo* SymbolTable::find_phrase(const std::string& phrase) const {
    // Longest-match-wins: with several case-insensitive matches, prefer the
    // longest table phrase, then the earliest.
    const SymbolInfo* best = nullptr;
    std::size_t best_len = 0;
    for (const auto& [key, info] : entries) {
        if (ci_equal(key, phrase) && key.size() >= best_len) {
            if (best == nullptr || key.size() > best_len) {
                best = &info;
                best_len = key.size();
            }
        }
    }
    return best;
}

namespace {

const SymbolInfo& resolve(const SymbolTable& symbols, const std::string& phrase) {
    const SymbolInfo* info = symbols.find_phrase(phrase);
    if (!info)
        throw CnlError(CnlError::Kind::unresolved_phrase,
                       "phrase '" + phrase + "' is not in the symbol table");
    return *info;
}

Value encode_value(const SymbolInfo& info, const std::string& phrase,
                   const std::string& var_phrase) {
    for (const auto& [key, value] : info.encoding)
        if (ci_equal(key, phrase)) return value;
    throw CnlError(CnlError::Kind::value_not_in_encoding,
                   "value '" + phrase + "' is not in the encoding of '" + var_phrase + "'");
}

} // namespace

DfrsFunctions compile_frames(const std::vector<RequirementFrame>& frames,
                             const SymbolTable& symbols) {
    DfrsFunctions out;
    out.components.resize(1);
    for (const RequirementFrame& frame : frames) {
        FunctionEntry entry;
        entry.requirement = frame.id;
        for (const ConditionRole& cond : frame.conditions) {
            const SymbolInfo& info = resolve(symbols, cond.patient);
            if (cond.modifier) {
                if (info.role != SymbolInfo::Role::timer)
                    throw CnlError(CnlError::Kind::bad_role,
                                   frame.id + ": timed condition over '" + cond.patient +
                                       "', which is not a timer");
                entry.timed_guard.clauses.push_back(Disj{{BExp{
                    Side::elapsed, info.var, cond.modifier->op,
                    Value::natural(cond.modifier->seconds)}}});
                continue;
            }
            Value value = encode_value(info, cond.to_value.value_or(""), cond.patient);
            if (cond.verb == ConditionRole::Verb::is) {
                entry.static_guard.clauses.push_back(
                    Disj{{BExp{Side::current, info.var, CmpOp::eq, value}}});
            } else {
                // "changes to v": the previous value differs and the current
                // one matches, so the rule fires exactly at the step that
                // flips the signal.
                entry.static_guard.clauses.push_back(
                    Disj{{BExp{Side::previous, info.var, CmpOp::neq, value}}});
                entry.static_guard.clauses.push_back(
                    Disj{{BExp{Side::current, info.var, CmpOp::eq, value}}});
            }
        }
        for (const ActionRole& action : frame.actions) {
            const SymbolInfo& info = resolve(symbols, action.patient);
            if (action.verb == ActionRole::Verb::reset) {
                if (info.role != SymbolInfo::Role::timer)
                    throw CnlError(CnlError::Kind::bad_role,
                                   frame.id + ": reset of '" + action.patient +
                                       "', which is not a timer");
                entry.assignments.push_back(Asgmt{info.var, std::nullopt});
            } else {
                Value value =
                    encode_value(info, action.to_value.value_or(""), action.patient);
                entry.assignments.push_back(Asgmt{info.var, value});
            }
        }
        if (entry.static_guard.empty() && entry.timed_guard.empty())
            throw CnlError(CnlError::Kind::guard_empty,
                           frame.id + ": a requirement needs at least one condition");
        out.components[0].push_back(std::move(entry));
    }
    return out;
}

Model assemble_model(const std::vector<RequirementFrame>& frames, const SymbolTable& symbols,
                     std::int64_t time_step) {
    Model model;
    model.time_step = time_step;
    for (const auto& [phrase, info] : symbols.entries) {
        VarDecl decl{info.var, info.type};
        switch (info.role) {
        case SymbolInfo::Role::input: model.sdfrs.variables.inputs.push_back(decl); break;
        case SymbolInfo::Role::output: model.sdfrs.variables.outputs.push_back(decl); break;
        case SymbolInfo::Role::timer: model.sdfrs.variables.timers.push_back(decl); break;
        }
        if (info.role == SymbolInfo::Role::input) {
            std::vector<Value> domain = info.domain;
            if (domain.empty() && info.type == Type::boolean)
                domain = {Value::boolean(false), Value::boolean(true)};
            model.domains.emplace_back(info.var, std::move(domain));
        }
    }
    auto initial_of = [&](const SymbolInfo& info) {
        if (info.initial) return *info.initial;
        switch (info.type) {
        case Type::boolean: return Value::boolean(false);
        case Type::integer: return Value::integer(0);
        case Type::natural: return Value::natural(0);
        }
        return Value::boolean(false);
    };
    auto append_initials = [&](SymbolInfo::Role role) {
        for (const auto& [phrase, info] : symbols.entries) {
            if (info.role != role) continue;
            Value v = initial_of(info);
            model.sdfrs.initial.push_back(info.var, ValuePair{v, v});
        }
    };
    append_initials(SymbolInfo::Role::input);
    append_initials(SymbolInfo::Role::output);
    append_initials(SymbolInfo::Role::timer);
    model.sdfrs.initial.push_back(std::string(kClockName),
                                  ValuePair{Value::natural(0), Value::natural(0)});
    model.sdfrs.functions = compile_frames(frames, symbols);
    return model;
}

std::vector<std::pair<std::string, std::string>>
load_requirements_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(Error::Kind::io, "cannot open requirements file " + path.string());
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    std::size_t index = 0;
    while (std::getline(in, line)) {
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t\r\n"));
        trimmed.erase(trimmed.find_last_not_of(" \t\r\n") + 1);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        ++index;
        std::string id;
        std::string sentence = trimmed;
        std::size_t colon = trimmed.find(':');
        if (colon != std::string::npos && colon > 0 &&
            trimmed.substr(0, colon).find(' ') == std::string::npos) {
            id = trimmed.substr(0, colon);
            sentence = trimmed.substr(colon + 1);
            sentence.erase(0, sentence.find_first_not_of(" \t"));
        } else {
            char buf[16];
            std::snprintf(buf, sizeof buf, "REQ%03zu", index);
            id = buf;
        }
        out.emplace_back(id, sentence);
    }
    return out;
}

SymbolTable load_symbols_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Error::Kind::io, "cannot open symbol file " + path.string());
    // ordered_json keeps the file's key order, which becomes declaration
    // order in the assembled model.
    nlohmann::ordered_json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Error::Kind::io, "cannot parse symbol file: " + std::string(e.what()));
    }
    if (!doc.is_object()) throw Error(Error::Kind::io, "symbol file must be a JSON object");

    SymbolTable table;
    for (const auto& [phrase, entry] : doc.items()) {
        SymbolInfo info;
        info.var = entry.at("var").get<std::string>();
        info.type = type_from_name(entry.at("type").get<std::string>());
        std::string role = entry.value("role", "output");
        if (role == "input") info.role = SymbolInfo::Role::input;
        else if (role == "output") info.role = SymbolInfo::Role::output;
        else if (role == "timer") info.role = SymbolInfo::Role::timer;
        else throw Error(Error::Kind::io, "unknown role '" + role + "' for '" + phrase + "'");
        if (entry.contains("encoding")) {
            for (const auto& [word, value] : entry.at("encoding").items())
                info.encoding.emplace_back(word, value_from_json(value, info.type));
        }
        if (entry.contains("initial"))
            info.initial = value_from_json(entry.at("initial"), info.type);
        if (entry.contains("domain")) {
            for (const auto& value : entry.at("domain"))
                info.domain.push_back(value_from_json(value, info.type));
        }
        table.entries.emplace_back(phrase, std::move(info));
    }
    return table;
}

} // namespace dfrs
