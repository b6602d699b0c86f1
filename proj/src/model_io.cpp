#include "dfrs/model_io.hpp"

#include <fstream>
#include <sstream>

namespace dfrs {

using nlohmann::json;

nlohmann::json value_to_json(const Value& v) {
    if (v.type() == Type::boolean) return v.as_bool();
    return v.as_int();
}

namespace {

std::vector<VarDecl> decls_from_json(const json& arr, const std::string& key) {
    if (!arr.is_array()) throw Error(Error::Kind::io, "'" + key + "' must be an array");
    std::vector<VarDecl> out;
    for (const auto& item : arr) {
        out.push_back(VarDecl{item.at("name").get<std::string>(),
                              type_from_name(item.at("type").get<std::string>())});
    }
    return out;
}

json decls_to_json(const std::vector<VarDecl>& decls) {
    json arr = json::array();
    for (const VarDecl& d : decls) arr.push_back({{"name", d.name}, {"type", type_name(d.type)}});
    return arr;
}

Type lookup_type(const DfrsVariables& vars, const std::string& name) {
    for (const VarDecl& d : vars.inputs)
        if (d.name == name) return d.type;
    for (const VarDecl& d : vars.outputs)
        if (d.name == name) return d.type;
    for (const VarDecl& d : vars.timers)
        if (d.name == name) return d.type;
    if (name == vars.clock.name) return vars.clock.type;
    throw Error(Error::Kind::io, "file references undeclared variable '" + name + "'");
}

Cnf guard_from_json(const json& arr, const DfrsVariables& vars) {
    Cnf guard;
    for (const auto& clause : arr) {
        Disj disj;
        for (const auto& atom : clause) {
            Side side = side_from_name(atom.at("side").get<std::string>());
            std::string var = atom.at("var").get<std::string>();
            Type expected = side == Side::elapsed ? Type::natural : lookup_type(vars, var);
            disj.atoms.push_back(BExp{side, var, op_from_name(atom.at("op").get<std::string>()),
                                      value_from_json(atom.at("value"), expected)});
        }
        guard.clauses.push_back(std::move(disj));
    }
    return guard;
}

json guard_to_json(const Cnf& guard) {
    json arr = json::array();
    for (const Disj& clause : guard.clauses) {
        json c = json::array();
        for (const BExp& atom : clause.atoms) {
            c.push_back({{"side", side_name(atom.side)},
                         {"var", atom.var},
                         {"op", op_name(atom.op)},
                         {"value", value_to_json(atom.rhs)}});
        }
        arr.push_back(std::move(c));
    }
    return arr;
}

Model model_from_json_impl(const json& doc) {
    Model model;
    model.sdfrs.variables.inputs = decls_from_json(doc.at("inputs"), "inputs");
    model.sdfrs.variables.outputs = decls_from_json(doc.at("outputs"), "outputs");
    if (doc.contains("timers"))
        model.sdfrs.variables.timers = decls_from_json(doc.at("timers"), "timers");

    const json& initial = doc.at("initial");
    if (!initial.is_object()) throw Error(Error::Kind::io, "'initial' must be an object");
    // The state is rebuilt in declaration order (inputs, outputs, timers,
    // clock); entries the declarations do not cover are appended afterwards
    // so the consistency checker can see and reject them.
    auto take = [&](const std::string& name, Type type) {
        if (!initial.contains(name)) return;
        const json& pair = initial.at(name);
        model.sdfrs.initial.push_back(name, ValuePair{value_from_json(pair.at("prev"), type),
                                                      value_from_json(pair.at("curr"), type)});
    };
    for (const VarDecl& d : model.sdfrs.variables.inputs) take(d.name, d.type);
    for (const VarDecl& d : model.sdfrs.variables.outputs) take(d.name, d.type);
    for (const VarDecl& d : model.sdfrs.variables.timers) take(d.name, d.type);
    take(model.sdfrs.variables.clock.name, model.sdfrs.variables.clock.type);
    for (const auto& [name, pair] : initial.items()) {
        if (model.sdfrs.initial.contains(name)) continue;
        Type guessed = pair.at("curr").is_boolean() ? Type::boolean : Type::integer;
        model.sdfrs.initial.push_back(name, ValuePair{value_from_json(pair.at("prev"), guessed),
                                                      value_from_json(pair.at("curr"), guessed)});
    }

    for (const auto& component : doc.at("functions")) {
        std::vector<FunctionEntry> entries;
        for (const auto& entry : component) {
            FunctionEntry fe;
            fe.requirement = entry.at("requirement").get<std::string>();
            fe.static_guard = guard_from_json(entry.at("static_guard"), model.sdfrs.variables);
            fe.timed_guard = guard_from_json(entry.at("timed_guard"), model.sdfrs.variables);
            for (const auto& a : entry.at("assignments")) {
                std::string target = a.at("target").get<std::string>();
                if (a.value("reset", false)) {
                    fe.assignments.push_back(Asgmt{target, std::nullopt});
                } else {
                    fe.assignments.push_back(
                        Asgmt{target, value_from_json(a.at("value"), lookup_type(
                                                                         model.sdfrs.variables,
                                                                         target))});
                }
            }
            entries.push_back(std::move(fe));
        }
        model.sdfrs.functions.components.push_back(std::move(entries));
    }

    const json& domains = doc.at("domains");
    for (const VarDecl& d : model.sdfrs.variables.inputs) {
        if (!domains.contains(d.name))
            throw Error(Error::Kind::io, "input '" + d.name + "' has no domain");
        std::vector<Value> values;
        for (const auto& v : domains.at(d.name)) values.push_back(value_from_json(v, d.type));
        model.domains.emplace_back(d.name, std::move(values));
    }

    model.time_step = doc.value("time_step", std::int64_t(1));
    if (model.time_step < 1)
        throw Error(Error::Kind::io, "time_step must be a positive integer");
    return model;
}

} // namespace

Model model_from_json(const json& doc) {
    try {
        return model_from_json_impl(doc);
    } catch (const json::exception& e) {
        throw Error(Error::Kind::io, std::string("malformed model document: ") + e.what());
    }
}

json model_to_json(const Model& model) {
    json doc;
    doc["inputs"] = decls_to_json(model.sdfrs.variables.inputs);
    doc["outputs"] = decls_to_json(model.sdfrs.variables.outputs);
    doc["timers"] = decls_to_json(model.sdfrs.variables.timers);

    json initial = json::object();
    for (const auto& [name, pair] : model.sdfrs.initial.entries())
        initial[name] = {{"prev", value_to_json(pair.previous)},
                         {"curr", value_to_json(pair.current)}};
    doc["initial"] = std::move(initial);

    json functions = json::array();
    for (const auto& component : model.sdfrs.functions.components) {
        json entries = json::array();
        for (const FunctionEntry& fe : component) {
            json assignments = json::array();
            for (const Asgmt& a : fe.assignments) {
                if (a.is_reset())
                    assignments.push_back({{"target", a.target}, {"reset", true}});
                else
                    assignments.push_back({{"target", a.target}, {"value", value_to_json(*a.value)}});
            }
            entries.push_back({{"static_guard", guard_to_json(fe.static_guard)},
                               {"timed_guard", guard_to_json(fe.timed_guard)},
                               {"assignments", std::move(assignments)},
                               {"requirement", fe.requirement}});
        }
        functions.push_back(std::move(entries));
    }
    doc["functions"] = std::move(functions);

    json domains = json::object();
    for (const auto& [name, values] : model.domains) {
        json arr = json::array();
        for (const Value& v : values) arr.push_back(value_to_json(v));
        domains[name] = std::move(arr);
    }
    doc["domains"] = std::move(domains);
    doc["time_step"] = model.time_step;
    return doc;
}

Model load_model_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Error::Kind::io, "cannot open model file " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error(Error::Kind::io,
                    "cannot parse model file " + path.string() + ": " + e.what());
    }
    try {
        return model_from_json(doc);
    } catch (const json::exception& e) {
        throw Error(Error::Kind::io,
                    "malformed model file " + path.string() + ": " + e.what());
    }
}

void save_model_file(const Model& model, const std::filesystem::path& path) {
    write_file(path, model_to_json(model).dump(2) + "\n");
}

std::string table_to_csv(const TestDataTable& table) {
    std::string out = "time";
    for (const std::string& n : table.input_names) out += "," + n;
    for (const std::string& n : table.output_names) out += "," + n;
    out += "\n";
    for (const auto& row : table.rows) {
        out += std::to_string(row.time);
        for (const Value& v : row.inputs) out += "," + v.to_string();
        for (const Value& v : row.outputs) out += "," + v.to_string();
        out += "\n";
    }
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

Value value_from_text(const std::string& text, Type type) {
    try {
        switch (type) {
        case Type::boolean:
            if (text == "true") return Value::boolean(true);
            if (text == "false") return Value::boolean(false);
            break;
        case Type::integer: return Value::integer(std::stoll(text));
        case Type::natural: return Value::natural(std::stoll(text));
        }
    } catch (const std::exception&) {
    }
    throw Error(Error::Kind::io, "cannot read '" + text + "' as " + type_name(type));
}

} // namespace

TestDataTable table_from_csv(const std::string& csv, const Model& model) {
    TestDataTable table;
    std::vector<Type> input_types, output_types;
    for (const VarDecl& d : model.sdfrs.variables.inputs) {
        table.input_names.push_back(d.name);
        input_types.push_back(d.type);
    }
    for (const VarDecl& d : model.sdfrs.variables.outputs) {
        table.output_names.push_back(d.name);
        output_types.push_back(d.type);
    }

    std::stringstream ss(csv);
    std::string line;
    if (!std::getline(ss, line)) throw Error(Error::Kind::io, "empty CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header = split_csv_line(line);
    std::vector<std::string> expected{"time"};
    expected.insert(expected.end(), table.input_names.begin(), table.input_names.end());
    expected.insert(expected.end(), table.output_names.begin(), table.output_names.end());
    if (header != expected)
        throw Error(Error::Kind::io, "CSV header does not match the model's columns");

    while (std::getline(ss, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != expected.size())
            throw Error(Error::Kind::io, "CSV row has the wrong number of fields");
        TestDataTable::Row row;
        row.time = std::stoll(fields[0]);
        std::size_t k = 1;
        for (Type t : input_types) row.inputs.push_back(value_from_text(fields[k++], t));
        for (Type t : output_types) row.outputs.push_back(value_from_text(fields[k++], t));
        table.rows.push_back(std::move(row));
    }
    return table;
}

json table_to_json(const TestDataTable& table) {
    json doc;
    json columns = json::array();
    columns.push_back("time");
    for (const std::string& n : table.input_names) columns.push_back(n);
    for (const std::string& n : table.output_names) columns.push_back(n);
    doc["columns"] = std::move(columns);
    json rows = json::array();
    for (const auto& row : table.rows) {
        json r = json::array();
        r.push_back(row.time);
        for (const Value& v : row.inputs) r.push_back(value_to_json(v));
        for (const Value& v : row.outputs) r.push_back(value_to_json(v));
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    return doc;
}

json coverage_to_json(const CoverageReport& report) {
    json doc;
    json hits = json::object();
    for (const auto& [req, count] : report.hits) hits[req] = count;
    doc["hits"] = std::move(hits);
    doc["covered"] = report.covered;
    doc["uncovered"] = report.uncovered;
    doc["trace_count"] = report.trace_count;
    doc["distinct_traces"] = report.distinct_traces;
    return doc;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Error::Kind::io, "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Error::Kind::io, "cannot write " + path.string());
    out << content;
}

} // namespace dfrs
