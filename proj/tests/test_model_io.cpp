#include <doctest.h>

#include "dfrs/check.hpp"
#include "dfrs/model_io.hpp"

#include "test_support.hpp"

using namespace dfrs;
using namespace fixtures;

TEST_CASE("the model file fixture loads into the hand-built model") {
    Model loaded = load_model_file(fixture_path("vm.json"));
    CHECK(loaded == vm_model());
    CHECK(check_sdfrs(loaded.sdfrs).ok());
}

TEST_CASE("model JSON round-trips") {
    Model vm = vm_model();
    CHECK(model_from_json(model_to_json(vm)) == vm);
}

TEST_CASE("the broken fixture loads and fails the consistency check") {
    Model broken = load_model_file(fixture_path("vm_broken.json"));
    CheckReport report = check_sdfrs(broken.sdfrs);
    REQUIRE_FALSE(report.ok());
    CHECK(report.has_family(RuleFamily::vname));
}

TEST_CASE("malformed model files are rejected with io errors") {
    CHECK_THROWS_AS(load_model_file(fixture_path("does_not_exist.json")), Error);

    nlohmann::json doc = model_to_json(vm_model());
    doc.erase("domains");
    CHECK_THROWS_AS(model_from_json(doc), Error);

    doc = model_to_json(vm_model());
    doc["time_step"] = 0;
    CHECK_THROWS_AS(model_from_json(doc), Error);

    doc = model_to_json(vm_model());
    doc["initial"]["the_system_mode"]["curr"] = true; // boolean where integer expected
    CHECK_THROWS_AS(model_from_json(doc), Error);
}

TEST_CASE("CSV export uses the documented header and value spellings") {
    TestDataTable table;
    table.input_names = {"a", "b"};
    table.output_names = {"m"};
    table.rows.push_back({0, {B(false), B(true)}, {I(-2)}});
    table.rows.push_back({5, {B(true), B(false)}, {I(3)}});
    CHECK(table_to_csv(table) == "time,a,b,m\n0,false,true,-2\n5,true,false,3\n");
}

TEST_CASE("CSV round-trips through the parser") {
    Model vm = vm_model();
    TestDataTable table;
    table.input_names = {kSensor, kButton};
    table.output_names = {kMode, kOutput};
    table.rows.push_back({0, {B(false), B(false)}, {I(1), I(0)}});
    table.rows.push_back({1, {B(true), B(false)}, {I(0), I(0)}});
    CHECK(table_from_csv(table_to_csv(table), vm) == table);

    CHECK_THROWS_AS(table_from_csv("time,x\n0,1\n", vm), Error);
    CHECK_THROWS_AS(table_from_csv("", vm), Error);
}
