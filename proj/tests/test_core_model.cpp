#include <doctest.h>

#include "dfrs/check.hpp"
#include "dfrs/eval.hpp"
#include "dfrs/rng.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

using namespace dfrs;
using namespace fixtures;

TEST_CASE("check_vname accepts ordinary names and rejects the reserved one") {
    CHECK(check_vname("the_coin_sensor"));
    CHECK_FALSE(check_vname("gc"));
    CHECK_FALSE(check_vname(""));
}

TEST_CASE("check_vname property: false exactly for empty or reserved names") {
    SplitMix64 rng(101);
    const std::string alphabet = "abcdefg_c";
    for (int i = 0; i < 2000; ++i) {
        std::string name;
        std::size_t len = rng.below(4); // short strings keep collisions with "gc" likely
        for (std::size_t k = 0; k < len; ++k) name += alphabet[rng.below(alphabet.size())];
        CHECK(check_vname(name) == (!name.empty() && name != "gc"));
    }
    CHECK_FALSE(check_vname("gc"));
}

TEST_CASE("values keep their invariants") {
    CHECK_THROWS_AS(Value::natural(-1), Error);
    CHECK(N(7).to_string() == "7");
    CHECK(B(true).tagged_string() == "b:true");
    CHECK(I(-3).tagged_string() == "i:-3");
    CHECK_FALSE(I(1) == N(1)); // structural equality is tag-aware
}

TEST_CASE("eval_bexp on the vending machine initial state") {
    Model vm = vm_model();
    CHECK(eval_bexp(vm.sdfrs.initial, curr_eq(kMode, I(1))));
    CHECK_FALSE(eval_bexp(vm.sdfrs.initial,
                          BExp{Side::previous, kSensor, CmpOp::eq, B(true)}));
}

TEST_CASE("eval_bexp elapsed-time atoms compare clock minus timer") {
    State s;
    s.push_back("t", pair(N(5), N(5)));
    s.push_back("gc", pair(N(40), N(40)));
    CHECK(eval_bexp(s, elapsed("t", CmpOp::ge, 30))); // 40 - 5 = 35
    CHECK_FALSE(eval_bexp(s, elapsed("t", CmpOp::lt, 30)));

    // natural subtraction truncates at zero
    State late;
    late.push_back("t", pair(N(9), N(9)));
    late.push_back("gc", pair(N(4), N(4)));
    CHECK(eval_bexp(late, elapsed("t", CmpOp::eq, 0)));
}

TEST_CASE("eval_bexp error paths") {
    Model vm = vm_model();
    CHECK_THROWS_AS(eval_bexp(vm.sdfrs.initial, curr_eq("no_such_var", B(true))), Error);
    CHECK_THROWS_AS(eval_bexp(vm.sdfrs.initial, curr_eq(kMode, B(true))), Error);
    CHECK_THROWS_AS(eval_bexp(vm.sdfrs.initial,
                              BExp{Side::current, kSensor, CmpOp::lt, B(true)}),
                    Error);
}

TEST_CASE("eval_cnf basics") {
    Model vm = vm_model();
    CHECK(eval_cnf(vm.sdfrs.initial, Cnf{})); // empty conjunction

    // REQ001's static guard holds on the state reached after the sensor flips
    State after_delay = vm.sdfrs.initial;
    after_delay.set(kSensor, pair(B(false), B(true)));
    after_delay.set("gc", pair(N(0), N(2)));
    const Cnf& req001 = vm.sdfrs.functions.components[0][0].static_guard;
    CHECK(eval_cnf(after_delay, req001));
    CHECK_FALSE(eval_cnf(vm.sdfrs.initial, req001)); // sensor never changed
}

TEST_CASE("eval_cnf agrees with a truth-table oracle on small formulas") {
    SplitMix64 rng(2024);
    const std::vector<std::string> vars{"a", "b", "c"};
    for (int round = 0; round < 300; ++round) {
        Cnf g;
        std::size_t clauses = rng.below(4); // 0..3, empty guard included
        for (std::size_t c = 0; c < clauses; ++c) {
            Disj clause;
            std::size_t atoms = 1 + rng.below(3);
            for (std::size_t a = 0; a < atoms; ++a) {
                clause.atoms.push_back(BExp{rng.below(2) ? Side::previous : Side::current,
                                            vars[rng.below(vars.size())],
                                            rng.below(2) ? CmpOp::eq : CmpOp::neq,
                                            B(rng.below(2) == 0)});
            }
            g.clauses.push_back(std::move(clause));
        }
        // enumerate all 4^3 previous/current assignments
        for (int bits = 0; bits < 64; ++bits) {
            State s;
            for (std::size_t v = 0; v < vars.size(); ++v) {
                bool prev = (bits >> (2 * v)) & 1;
                bool curr = (bits >> (2 * v + 1)) & 1;
                s.push_back(vars[v], pair(B(prev), B(curr)));
            }
            CHECK(eval_cnf(s, g) == oracles::eval_cnf(s, g));
        }
    }
}

TEST_CASE("apply_asgmts reproduces the coin-insertion reaction") {
    Model vm = vm_model();
    State middle = vm.sdfrs.initial;
    middle.set(kSensor, pair(B(false), B(true)));
    middle.set("gc", pair(N(0), N(2)));

    State reacted = apply_asgmts(middle, {reset(kTimer), set_to(kMode, I(0))});
    CHECK(reacted.at(kMode) == pair(I(1), I(0)));
    CHECK(reacted.at(kTimer) == pair(N(0), N(2))); // reset snapshots the clock
    CHECK(reacted.at("gc") == pair(N(0), N(2)));   // untouched
    CHECK(reacted.at(kSensor) == pair(B(false), B(true)));
}

TEST_CASE("apply_asgmts edge cases") {
    Model vm = vm_model();
    CHECK(apply_asgmts(vm.sdfrs.initial, {}) == vm.sdfrs.initial);

    State s;
    s.push_back("t", pair(N(0), N(7)));
    s.push_back("gc", pair(N(0), N(12)));
    State reset_state = apply_asgmts(s, {reset("t")});
    CHECK(reset_state.at("t") == pair(N(7), N(12)));

    CHECK_THROWS_AS(apply_asgmts(vm.sdfrs.initial, {set_to("nope", I(1))}), Error);
    CHECK_THROWS_AS(apply_asgmts(vm.sdfrs.initial, {set_to(kMode, B(true))}), Error);
}

TEST_CASE("apply_asgmts properties: name set and tags preserved, inputs and clock fixed") {
    Model vm = vm_model();
    SplitMix64 rng(7);
    State s = vm.sdfrs.initial;
    for (int round = 0; round < 200; ++round) {
        std::vector<Asgmt> batch;
        std::size_t n = 1 + rng.below(3);
        for (std::size_t k = 0; k < n; ++k) {
            switch (rng.below(3)) {
            case 0: batch.push_back(set_to(kMode, I(static_cast<std::int64_t>(rng.below(4))))); break;
            case 1: batch.push_back(set_to(kOutput, I(static_cast<std::int64_t>(rng.below(2))))); break;
            default: batch.push_back(reset(kTimer)); break;
            }
        }
        State next = apply_asgmts(s, batch);
        REQUIRE(next.size() == s.size());
        for (std::size_t i = 0; i < s.entries().size(); ++i) {
            CHECK(next.entries()[i].first == s.entries()[i].first);
            CHECK(next.entries()[i].second.current.type() == s.entries()[i].second.current.type());
        }
        CHECK(next.at("gc") == s.at("gc"));
        CHECK(next.at(kSensor) == s.at(kSensor));
        CHECK(next.at(kButton) == s.at(kButton));
        s = std::move(next);
    }
}

TEST_CASE("check_sdfrs accepts the vending machine") {
    CHECK(check_sdfrs(vm_model().sdfrs).ok());
}

namespace {

// Exactly-one-family helper for the single-fault fixture variants.
void expect_only(const SDfrs& model, RuleFamily family) {
    CheckReport report = check_sdfrs(model);
    REQUIRE_FALSE(report.ok());
    for (const Violation& v : report.violations) {
        INFO(rule_family_name(v.family) << ": " << v.message);
        CHECK(v.family == family);
    }
}

} // namespace

TEST_CASE("check_sdfrs flags each rule family in isolation") {
    Model vm = vm_model();

    SUBCASE("vname: empty variable name") {
        SDfrs m = vm.sdfrs;
        // consistent rename of an output to the empty string
        m.variables.outputs[1].name = "";
        State init;
        for (auto [name, p] : m.initial.entries())
            init.push_back(name == kOutput ? "" : name, p);
        m.initial = init;
        for (auto& component : m.functions.components)
            for (auto& entry : component)
                for (auto& a : entry.assignments)
                    if (a.target == kOutput) a.target = "";
        expect_only(m, RuleFamily::vname);
    }
    SUBCASE("svars: duplicated declaration") {
        SDfrs m = vm.sdfrs;
        m.variables.inputs.push_back(m.variables.inputs[0]);
        expect_only(m, RuleFamily::svars);
    }
    SUBCASE("disjoint: one name declared as output and timer") {
        SDfrs m = vm.sdfrs;
        m.variables.outputs.push_back({kTimer, Type::natural});
        expect_only(m, RuleFamily::disjoint);
    }
    SUBCASE("gc-var: clock renamed") {
        SDfrs m = vm.sdfrs;
        m.variables.clock.name = "clock";
        State init;
        for (auto [name, p] : m.initial.entries())
            init.push_back(name == "gc" ? "clock" : name, p);
        m.initial = init;
        expect_only(m, RuleFamily::gc_var);
    }
    SUBCASE("timer-type: timer not natural") {
        SDfrs m = vm.sdfrs;
        m.variables.timers[0].type = Type::integer;
        m.initial.set(kTimer, pair(I(0), I(0)));
        expect_only(m, RuleFamily::timer_type);
    }
    SUBCASE("state: missing initial entry") {
        SDfrs m = vm.sdfrs;
        State init;
        for (auto [name, p] : m.initial.entries())
            if (name != kTimer) init.push_back(name, p);
        m.initial = init;
        expect_only(m, RuleFamily::state);
    }
    SUBCASE("function-rules: both guards emptied") {
        SDfrs m = vm.sdfrs;
        m.functions.components[0][0].static_guard = Cnf{};
        m.functions.components[0][0].timed_guard = Cnf{};
        expect_only(m, RuleFamily::function_rules);
    }
    SUBCASE("references: guard over an undeclared variable") {
        SDfrs m = vm.sdfrs;
        m.functions.components[0][0].static_guard.clauses.push_back(
            lit(curr_eq("the_door_sensor", B(true))));
        expect_only(m, RuleFamily::references);
    }
    SUBCASE("types: comparison against the wrong tag") {
        SDfrs m = vm.sdfrs;
        m.functions.components[0][0].static_guard.clauses[0] = lit(curr_eq(kMode, B(true)));
        expect_only(m, RuleFamily::types);
    }
}

TEST_CASE("check_sdfrs reports the reserved name when an input is called gc") {
    Model vm = vm_model();
    SDfrs m = vm.sdfrs;
    m.variables.inputs[0].name = "gc";
    CheckReport report = check_sdfrs(m);
    CHECK(report.has_family(RuleFamily::vname));
}
