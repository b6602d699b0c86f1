#include <doctest.h>

#include "dfrs/check.hpp"
#include "dfrs/cnl.hpp"
#include "dfrs/expansion.hpp"
#include "dfrs/model_io.hpp"
#include "dfrs/rng.hpp"

#include "test_support.hpp"

using namespace dfrs;
using namespace fixtures;

namespace {

const std::string kReq001Sentence =
    "When the system mode is idle, and the coin sensor changes to true, the coffee machine "
    "system shall: reset the request timer, assign choice to the system mode";

RequirementFrame req001_frame() {
    RequirementFrame frame;
    frame.id = "REQ001";
    frame.conditions.push_back(
        {ConditionRole::Verb::is, "the system mode", "idle", std::nullopt, std::nullopt});
    frame.conditions.push_back(
        {ConditionRole::Verb::changes, "the coin sensor", "true", std::nullopt, std::nullopt});
    frame.actions.push_back({ActionRole::Verb::reset, "the coffee machine system",
                             "the request timer", std::nullopt});
    frame.actions.push_back({ActionRole::Verb::assign, "the coffee machine system",
                             "the system mode", "choice"});
    return frame;
}

} // namespace

TEST_CASE("parsing the coin-insertion requirement fills every thematic role") {
    RequirementFrame frame = parse_requirement(kReq001Sentence, "REQ001");
    CHECK(frame == req001_frame());
}

TEST_CASE("sentences outside the grammar fail with position and expectations") {
    try {
        parse_requirement("The machine shall explode", "REQ900");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.position() == 0);
        REQUIRE_FALSE(e.expected().empty());
        CHECK(e.expected()[0] == "when");
    }

    // missing action list
    CHECK_THROWS_AS(
        parse_requirement("When the system mode is idle, the machine shall:", "REQ901"),
        ParseError);
    // unknown action verb
    CHECK_THROWS_AS(parse_requirement(
                        "When the system mode is idle, the machine shall: explode", "REQ902"),
                    ParseError);
}

TEST_CASE("timed conditions parse into comparison modifiers") {
    RequirementFrame frame = parse_requirement(
        "When the request timer is greater than 30 seconds, the machine shall: assign strong "
        "to the coffee machine output",
        "REQ903");
    REQUIRE(frame.conditions.size() == 1);
    const ConditionRole& cond = frame.conditions[0];
    CHECK(cond.patient == "the request timer");
    REQUIRE(cond.modifier.has_value());
    CHECK(cond.modifier->op == CmpOp::gt);
    CHECK(cond.modifier->seconds == 30);
    CHECK_FALSE(cond.to_value.has_value());
    REQUIRE(frame.actions.size() == 1);
    CHECK(frame.actions[0].to_value == "strong");
}

TEST_CASE("all four comparison phrases parse") {
    auto modifier_of = [](const std::string& phrase) {
        RequirementFrame f = parse_requirement(
            "When the request timer is " + phrase +
                " 5 seconds, the machine shall: reset the request timer",
            "R");
        return f.conditions.at(0).modifier.value();
    };
    CHECK(modifier_of("greater than").op == CmpOp::gt);
    CHECK(modifier_of("less than").op == CmpOp::lt);
    CHECK(modifier_of("greater or equal").op == CmpOp::ge);
    CHECK(modifier_of("less or equal").op == CmpOp::le);
}

TEST_CASE("keyword matching ignores case") {
    RequirementFrame frame = parse_requirement(
        "WHEN the system mode IS idle, AND the coin sensor CHANGES TO true, the coffee "
        "machine system SHALL: RESET the request timer, ASSIGN choice TO the system mode",
        "REQ001");
    CHECK(frame.conditions.size() == 2);
    CHECK(frame.actions.size() == 2);
}

TEST_CASE("printed frames parse back to themselves") {
    CHECK(parse_requirement(print_frame(req001_frame()), "REQ001") == req001_frame());

    SplitMix64 rng(88);
    const std::vector<std::string> patients{"the water heater", "the system mode",
                                            "the left door", "the request timer"};
    const std::vector<std::string> values{"idle", "weak coffee", "true", "open"};
    for (int round = 0; round < 200; ++round) {
        RequirementFrame frame;
        frame.id = "R" + std::to_string(round);
        std::size_t conds = 1 + rng.below(3);
        for (std::size_t i = 0; i < conds; ++i) {
            ConditionRole cond;
            cond.patient = patients[rng.below(patients.size())];
            switch (rng.below(3)) {
            case 0:
                cond.verb = ConditionRole::Verb::is;
                cond.to_value = values[rng.below(values.size())];
                break;
            case 1:
                cond.verb = ConditionRole::Verb::changes;
                cond.to_value = values[rng.below(values.size())];
                break;
            default:
                cond.verb = ConditionRole::Verb::is;
                cond.modifier = ConditionRole::TimedModifier{
                    std::vector<CmpOp>{CmpOp::gt, CmpOp::lt, CmpOp::ge,
                                       CmpOp::le}[rng.below(4)],
                    static_cast<std::int64_t>(rng.below(100))};
                break;
            }
            frame.conditions.push_back(std::move(cond));
        }
        std::size_t actions = 1 + rng.below(2);
        for (std::size_t i = 0; i < actions; ++i) {
            ActionRole action;
            action.agent = "the control unit";
            action.patient = patients[rng.below(patients.size())];
            if (rng.below(2)) {
                action.verb = ActionRole::Verb::reset;
            } else {
                action.verb = ActionRole::Verb::assign;
                action.to_value = values[rng.below(values.size())];
            }
            frame.actions.push_back(std::move(action));
        }
        RequirementFrame reparsed = parse_requirement(print_frame(frame), frame.id);
        CHECK(reparsed == frame);
    }
}

TEST_CASE("compiling the coin-insertion frame yields the expected entry") {
    SymbolTable symbols = load_symbols_file(fixture_path("vm_symbols.json"));
    DfrsFunctions functions = compile_frames({req001_frame()}, symbols);
    REQUIRE(functions.components.size() == 1);
    REQUIRE(functions.components[0].size() == 1);
    const FunctionEntry& entry = functions.components[0][0];

    Cnf expected_static{{lit(curr_eq(kMode, I(1))), lit(prev_neq(kSensor, B(true))),
                         lit(curr_eq(kSensor, B(true)))}};
    CHECK(entry.static_guard == expected_static);
    CHECK(entry.timed_guard.empty());
    CHECK(entry.assignments == std::vector<Asgmt>{reset(kTimer), set_to(kMode, I(0))});
    CHECK(entry.requirement == "REQ001");
}

TEST_CASE("compile errors carry their cause") {
    SymbolTable symbols = load_symbols_file(fixture_path("vm_symbols.json"));

    RequirementFrame no_conditions;
    no_conditions.id = "R1";
    no_conditions.actions.push_back(
        {ActionRole::Verb::reset, "the system", "the request timer", std::nullopt});
    try {
        compile_frames({no_conditions}, symbols);
        CHECK(false);
    } catch (const CnlError& e) {
        CHECK(e.cnl_kind() == CnlError::Kind::guard_empty);
    }

    RequirementFrame unknown = req001_frame();
    unknown.conditions[0].patient = "the flux capacitor";
    try {
        compile_frames({unknown}, symbols);
        CHECK(false);
    } catch (const CnlError& e) {
        CHECK(e.cnl_kind() == CnlError::Kind::unresolved_phrase);
    }

    RequirementFrame bad_value = req001_frame();
    bad_value.conditions[0].to_value = "sideways";
    try {
        compile_frames({bad_value}, symbols);
        CHECK(false);
    } catch (const CnlError& e) {
        CHECK(e.cnl_kind() == CnlError::Kind::value_not_in_encoding);
    }

    RequirementFrame timed_over_output = req001_frame();
    timed_over_output.conditions[0] = {ConditionRole::Verb::is, "the system mode", std::nullopt,
                                       std::nullopt,
                                       ConditionRole::TimedModifier{CmpOp::gt, 3}};
    try {
        compile_frames({timed_over_output}, symbols);
        CHECK(false);
    } catch (const CnlError& e) {
        CHECK(e.cnl_kind() == CnlError::Kind::bad_role);
    }
}

TEST_CASE("the requirement fixture compiles into the vending machine model") {
    auto sentences = load_requirements_file(fixture_path("vm_requirements.txt"));
    REQUIRE(sentences.size() == 5);
    CHECK(sentences[0].first == "REQ001");

    SymbolTable symbols = load_symbols_file(fixture_path("vm_symbols.json"));
    std::vector<RequirementFrame> frames;
    for (const auto& [id, sentence] : sentences)
        frames.push_back(parse_requirement(sentence, id));

    Model compiled = assemble_model(frames, symbols, 1);
    CHECK(check_sdfrs(compiled.sdfrs).ok());
    CHECK(compiled == vm_model());
    CHECK(compiled == load_model_file(fixture_path("vm.json")));

    // the compiled model expands into the coin-insertion chain
    InputDomains restricted = compiled.domains;
    restricted[1].second = {B(false)};
    EDfrs e = build_tr(compiled.sdfrs, restricted, 3, 2);
    bool found = false;
    for (const Trans& t : e.transitions) {
        if (const auto* f = std::get_if<FunctionLabel>(&t.label)) {
            found = found || (f->requirement == "REQ001" &&
                              t.target.at(kMode).current == I(0) &&
                              t.target.at(kTimer).current == N(2) &&
                              t.target.at("gc").current == N(2));
        }
    }
    CHECK(found);

    // every emitted entry keeps its requirement id
    for (const auto& component : compiled.sdfrs.functions.components)
        for (const FunctionEntry& entry : component) CHECK_FALSE(entry.requirement.empty());
}
