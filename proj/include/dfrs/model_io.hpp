#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "dfrs/model.hpp"
#include "dfrs/tracegen.hpp"

namespace dfrs {

/// Converts a JSON scalar into a model value of the expected type. Booleans
/// map to boolean values, numbers to integers or naturals per `expected`.
template <typename BasicJson>
Value value_from_json(const BasicJson& j, Type expected) {
    switch (expected) {
    case Type::boolean:
        if (!j.is_boolean())
            throw Error(Error::Kind::io, "expected a JSON boolean, got " + j.dump());
        return Value::boolean(j.template get<bool>());
    case Type::integer:
        if (!j.is_number_integer())
            throw Error(Error::Kind::io, "expected a JSON integer, got " + j.dump());
        return Value::integer(j.template get<std::int64_t>());
    case Type::natural:
        if (!j.is_number_integer())
            throw Error(Error::Kind::io, "expected a JSON integer, got " + j.dump());
        return Value::natural(j.template get<std::int64_t>());
    }
    throw Error(Error::Kind::io, "unknown type");
}

nlohmann::json value_to_json(const Value& v);

/// Model file schema (all field names normative):
///   inputs/outputs/timers : arrays of {name, type}
///   initial               : object name -> {prev, curr}
///   functions             : array (per component) of arrays of
///                           {static_guard, timed_guard, assignments,
///                            requirement}
///   domains               : object input name -> array of values
///   time_step             : positive integer, defaults to 1
/// Guards are arrays of arrays of atoms {side, var, op, value} with side one
/// of "prev", "curr", "elapsed"; assignments are {target, value} or
/// {target, reset: true}.
Model model_from_json(const nlohmann::json& doc);
nlohmann::json model_to_json(const Model& model);

Model load_model_file(const std::filesystem::path& path);
void save_model_file(const Model& model, const std::filesystem::path& path);

/// CSV rendering: header "time,<inputs>,<outputs>", booleans as
/// "false"/"true", integers in decimal.
std::string table_to_csv(const TestDataTable& table);

/// Parses test data back from CSV; the model supplies the expected column
/// layout and value types.
TestDataTable table_from_csv(const std::string& csv, const Model& model);

nlohmann::json table_to_json(const TestDataTable& table);
nlohmann::json coverage_to_json(const CoverageReport& report);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

} // namespace dfrs
