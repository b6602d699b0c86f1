#include <doctest.h>

#include <set>

#include "dfrs/model_io.hpp"
#include "dfrs/tracegen.hpp"

#include "test_support.hpp"

using namespace dfrs;
using namespace fixtures;

namespace {

// Canonical five-step run: two quiet seconds, coin and request together at
// t=2, the reaction, two more observations.
Trace reference_run_trace(const Model& vm) {
    Trace t;
    t.model_id = model_id(vm);

    State s = vm.sdfrs.initial;
    auto delay = [&](bool sensor, bool button) {
        DelayLabel label{1, {set_to(kSensor, B(sensor)), set_to(kButton, B(button))}};
        State next = s;
        next.set("gc", pair(s.at("gc").current,
                            N(s.at("gc").current.as_int() + 1)));
        next.set(kSensor, pair(s.at(kSensor).current, B(sensor)));
        next.set(kButton, pair(s.at(kButton).current, B(button)));
        s = next;
        t.steps.push_back({label, s});
    };

    delay(false, false);
    delay(true, true);

    FunctionLabel reaction{{reset(kTimer), set_to(kMode, I(0))}, "REQ001"};
    State reacted = s;
    reacted.set(kTimer, pair(N(0), N(2)));
    reacted.set(kMode, pair(I(1), I(0)));
    s = reacted;
    t.steps.push_back({reaction, s});

    delay(true, true);
    delay(false, false);
    return t;
}

} // namespace

TEST_CASE("gen_valid_trace with size 0 is the empty trace") {
    Model vm = vm_model();
    Trace t = gen_valid_trace(vm, 0, 99);
    CHECK(t.steps.empty());
    CHECK(t.seed == 99);
    CHECK(t.model_id == model_id(vm));
}

TEST_CASE("sample produces 11 traces per call, deterministically") {
    Model vm = vm_model();
    CHECK(sample(vm, 1, 10, 7).size() == 11);

    std::vector<Trace> a = sample(vm, 3, 25, 1234);
    std::vector<Trace> b = sample(vm, 3, 25, 1234);
    CHECK(a.size() == 33);
    CHECK(a == b);

    std::vector<Trace> c = sample(vm, 3, 25, 1235);
    CHECK(a != c);
}

TEST_CASE("every sampled trace replays and respects the size bound") {
    Model vm = vm_model();
    for (std::uint64_t seed : {3u, 77u, 900u}) {
        for (const Trace& t : sample(vm, 2, 40, seed)) {
            CHECK(t.steps.size() <= 40);
            ReplayVerdict verdict = validate_trace(vm, t);
            if (!verdict.valid()) {
                INFO("step " << verdict.failure->step << ": " << verdict.failure->reason);
                CHECK(verdict.valid());
            }
        }
    }
}

TEST_CASE("the stop draw fires with probability 1/(1+remaining)") {
    SplitMix64 rng(5150);
    int stops = 0;
    for (int i = 0; i < 10000; ++i)
        if (stop_draw(rng, 1)) ++stops;
    double rate = stops / 10000.0;
    CHECK(rate >= 0.48);
    CHECK(rate <= 0.52);
}

TEST_CASE("dead states abort generation with a diagnostic") {
    Model m = vm_model();
    m.domains[0].second.clear(); // sensor has no possible value
    try {
        gen_valid_trace(m, 10, 1);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == Error::Kind::dead_state);
    }
}

TEST_CASE("validate_trace accepts the tabular-example run") {
    Model vm = vm_model();
    CHECK(validate_trace(vm, reference_run_trace(vm)).valid());
}

TEST_CASE("validate_trace rejects a clock jump wider than the step") {
    Model vm = vm_model();
    Trace t = reference_run_trace(vm);
    // retime the first delay to 2 time units
    auto& first = t.steps[0];
    std::get<DelayLabel>(first.label).delta = 2;
    first.resulting.set("gc", pair(N(0), N(2)));
    ReplayVerdict verdict = validate_trace(vm, t);
    REQUIRE_FALSE(verdict.valid());
    CHECK(verdict.failure->step == 0);
}

TEST_CASE("validate_trace pinpoints a tampered resulting state") {
    Model vm = vm_model();
    Trace t = reference_run_trace(vm);
    t.steps[2].resulting.set(kOutput, pair(I(0), I(1)));
    ReplayVerdict verdict = validate_trace(vm, t);
    REQUIRE_FALSE(verdict.valid());
    CHECK(verdict.failure->step == 2);
    CHECK(verdict.failure->reason.find("state-mismatch") != std::string::npos);
}

TEST_CASE("export_table reproduces the tabular example") {
    Model vm = vm_model();
    TestDataTable table = export_table(vm, reference_run_trace(vm));
    REQUIRE(table.rows.size() == 5);
    std::vector<std::vector<std::string>> expected{
        {"0", "false", "false", "1", "0"},
        {"1", "false", "false", "1", "0"},
        {"2", "true", "true", "0", "0"},
        {"3", "true", "true", "0", "0"},
        {"4", "false", "false", "0", "0"},
    };
    for (std::size_t r = 0; r < expected.size(); ++r) {
        CHECK(std::to_string(table.rows[r].time) == expected[r][0]);
        CHECK(table.rows[r].inputs[0].to_string() == expected[r][1]);
        CHECK(table.rows[r].inputs[1].to_string() == expected[r][2]);
        CHECK(table.rows[r].outputs[0].to_string() == expected[r][3]);
        CHECK(table.rows[r].outputs[1].to_string() == expected[r][4]);
    }
}

TEST_CASE("export_table of the empty trace is the initial snapshot") {
    Model vm = vm_model();
    Trace empty;
    empty.model_id = model_id(vm);
    TestDataTable table = export_table(vm, empty);
    REQUIRE(table.rows.size() == 1);
    CHECK(table.rows[0].time == 0);
    CHECK(table.rows[0].outputs[0] == I(1));
}

TEST_CASE("export_table rejects invalid traces") {
    Model vm = vm_model();
    Trace t = reference_run_trace(vm);
    t.steps[1].resulting.set(kMode, pair(I(1), I(2)));
    CHECK_THROWS_AS(export_table(vm, t), Error);
}

TEST_CASE("export_table rows: one per instant, quiescent values") {
    Model vm = vm_model();
    for (const Trace& t : sample(vm, 1, 60, 31)) {
        TestDataTable table = export_table(vm, t);
        std::size_t delays = 0;
        for (const TraceStep& s : t.steps)
            if (std::holds_alternative<DelayLabel>(s.label)) ++delays;
        REQUIRE(table.rows.size() == delays + 1);
        for (std::size_t r = 0; r < table.rows.size(); ++r)
            CHECK(table.rows[r].time == static_cast<std::int64_t>(r) * vm.time_step);
    }
}

TEST_CASE("the default-seed 110-trace suite covers every requirement") {
    Model vm = vm_model();
    nlohmann::json expected =
        nlohmann::json::parse(read_file(fixture_path("vm_expected_coverage.json")));
    CoverageReport cov = coverage(
        vm, sample(vm, expected.at("calls").get<std::uint64_t>(),
                   expected.at("size").get<std::uint64_t>(),
                   expected.at("seed").get<std::uint64_t>()));
    CHECK(cov.uncovered.empty());
    CHECK(cov.distinct_traces == expected.at("distinct_traces").get<std::size_t>());
    for (const auto& [req, count] : cov.hits) {
        INFO(req);
        CHECK(count == expected.at("hits").at(req).get<std::size_t>());
    }
}

TEST_CASE("coverage counts requirement hits and lists uncovered ids") {
    Model vm = vm_model();

    CoverageReport none = coverage(vm, {});
    CHECK(none.covered.empty());
    CHECK(none.uncovered.size() == 5);
    CHECK(none.trace_count == 0);

    std::vector<Trace> one{reference_run_trace(vm)};
    CoverageReport report = coverage(vm, one);
    REQUIRE(report.hits.size() == 5);
    CHECK(report.hits[0].first == "REQ001");
    CHECK(report.hits[0].second == 1);
    CHECK(report.covered == std::vector<std::string>{"REQ001"});

    // duplicates are kept but counted separately from the distinct tally
    std::vector<Trace> dup{reference_run_trace(vm), reference_run_trace(vm)};
    CoverageReport dup_report = coverage(vm, dup);
    CHECK(dup_report.trace_count == 2);
    CHECK(dup_report.distinct_traces == 1);
    CHECK(dup_report.hits[0].second == 2);
}
