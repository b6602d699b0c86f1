#include "dfrs/conformance.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <csignal>
#include <cstdio>
#include <cstring>
#include <optional>

#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "dfrs/check.hpp"
#include "dfrs/eval.hpp"
#include "dfrs/expansion.hpp"
#include "dfrs/rng.hpp"

namespace dfrs {

std::string RunVerdict::to_string() const {
    switch (kind) {
    case Kind::pass: return "pass";
    case Kind::fail:
        return "fail at row " + std::to_string(row) + " column " + column + ": expected " +
               expected + ", actual " + actual;
    case Kind::inconclusive: return "inconclusive: " + reason;
    }
    return "?";
}

namespace {

std::string wire_encode(const Value& v) {
    if (v.type() == Type::boolean) return v.as_bool() ? "1" : "0";
    return std::to_string(v.as_int());
}

// Bidirectional pipe to a child process with line-oriented, polled reads.
class SutProcess {
public:
    ~SutProcess() { shutdown(); }

    bool launch(const SutSession& session, std::string& error) {
        int to_child[2];
        int from_child[2];
        if (pipe(to_child) != 0 || pipe(from_child) != 0) {
            error = "pipe: " + std::string(std::strerror(errno));
            return false;
        }
        pid_ = fork();
        if (pid_ < 0) {
            error = "fork: " + std::string(std::strerror(errno));
            return false;
        }
        if (pid_ == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            std::vector<char*> argv;
            argv.push_back(const_cast<char*>(session.command.c_str()));
            for (const std::string& a : session.args) argv.push_back(const_cast<char*>(a.c_str()));
            argv.push_back(nullptr);
            execvp(session.command.c_str(), argv.data());
            _exit(127);
        }
        close(to_child[0]);
        close(from_child[1]);
        in_fd_ = to_child[1];
        out_fd_ = from_child[0];
        return true;
    }

    bool write_line(const std::string& line) {
        std::string data = line + "\n";
        std::size_t sent = 0;
        while (sent < data.size()) {
            ssize_t n = ::write(in_fd_, data.data() + sent, data.size() - sent);
            if (n < 0) {
                if (errno == EINTR) continue;
                return false;
            }
            sent += static_cast<std::size_t>(n);
        }
        return true;
    }

    void close_input() {
        if (in_fd_ >= 0) {
            ::close(in_fd_);
            in_fd_ = -1;
        }
    }

    enum class Read { line, eof, timed_out, error };

    Read read_line(std::string& out, int timeout_ms) {
        for (;;) {
            std::size_t newline = buffer_.find('\n');
            if (newline != std::string::npos) {
                out = buffer_.substr(0, newline);
                if (!out.empty() && out.back() == '\r') out.pop_back();
                buffer_.erase(0, newline + 1);
                return Read::line;
            }
            struct pollfd pfd{out_fd_, POLLIN, 0};
            int ready = ::poll(&pfd, 1, timeout_ms);
            if (ready == 0) return Read::timed_out;
            if (ready < 0) {
                if (errno == EINTR) continue;
                return Read::error;
            }
            char chunk[512];
            ssize_t n = ::read(out_fd_, chunk, sizeof chunk);
            if (n < 0) {
                if (errno == EINTR) continue;
                return Read::error;
            }
            if (n == 0) return buffer_.empty() ? Read::eof : Read::line; // trailing partial line
            buffer_.append(chunk, static_cast<std::size_t>(n));
        }
    }

private:
    void shutdown() {
        close_input();
        if (out_fd_ >= 0) ::close(out_fd_);
        if (pid_ > 0) {
            ::kill(pid_, SIGKILL);
            int status = 0;
            ::waitpid(pid_, &status, 0);
        }
    }

    pid_t pid_ = -1;
    int in_fd_ = -1;
    int out_fd_ = -1;
    std::string buffer_;
};

struct SigpipeGuard {
    SigpipeGuard() { previous = ::signal(SIGPIPE, SIG_IGN); }
    ~SigpipeGuard() { ::signal(SIGPIPE, previous); }
    void (*previous)(int);
};

bool parse_wire_token(const std::string& token, Type type, Value& out) {
    if (type == Type::boolean) {
        if (token != "0" && token != "1") return false;
        out = Value::boolean(token == "1");
        return true;
    }
    if (token.empty()) return false;
    std::size_t start = token[0] == '-' ? 1 : 0;
    if (start == token.size()) return false;
    for (std::size_t i = start; i < token.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(token[i]))) return false;
    std::int64_t n = std::stoll(token);
    if (type == Type::natural) {
        if (n < 0) return false;
        out = Value::natural(n);
    } else {
        out = Value::integer(n);
    }
    return true;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

} // namespace

RunVerdict run_trace_against_sut(const TestDataTable& table, const SutSession& session) {
    SigpipeGuard guard;
    SutProcess proc;
    std::string error;
    if (!proc.launch(session, error))
        return {RunVerdict::Kind::inconclusive, 0, "", "", "", "launch failed: " + error};

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const TestDataTable::Row& row = table.rows[r];
        std::string stimulus = std::to_string(row.time);
        for (const Value& v : row.inputs) stimulus += " " + wire_encode(v);
        if (!proc.write_line(stimulus))
            return {RunVerdict::Kind::inconclusive, 0, "", "", "",
                    "SUT closed its input at row " + std::to_string(r)};

        std::string response;
        switch (proc.read_line(response, session.timeout_ms)) {
        case SutProcess::Read::line: break;
        case SutProcess::Read::eof:
            return {RunVerdict::Kind::inconclusive, 0, "", "", "",
                    "SUT ended before answering row " + std::to_string(r)};
        case SutProcess::Read::timed_out:
            return {RunVerdict::Kind::inconclusive, 0, "", "", "",
                    "timeout waiting for row " + std::to_string(r)};
        case SutProcess::Read::error:
            return {RunVerdict::Kind::inconclusive, 0, "", "", "", "read error"};
        }

        std::vector<std::string> tokens = split_ws(response);
        if (tokens.size() != row.outputs.size())
            return {RunVerdict::Kind::inconclusive, 0, "", "", "",
                    "malformed response at row " + std::to_string(r) + ": '" + response + "'"};
        for (std::size_t c = 0; c < row.outputs.size(); ++c) {
            Value actual = Value::boolean(false);
            if (!parse_wire_token(tokens[c], row.outputs[c].type(), actual))
                return {RunVerdict::Kind::inconclusive, 0, "", "", "",
                        "malformed value '" + tokens[c] + "' at row " + std::to_string(r)};
            if (!(actual == row.outputs[c]))
                return {RunVerdict::Kind::fail, r, table.output_names[c],
                        wire_encode(row.outputs[c]), tokens[c], ""};
        }
    }

    proc.close_input();
    std::string leftover;
    switch (proc.read_line(leftover, session.timeout_ms)) {
    case SutProcess::Read::eof: return {};
    case SutProcess::Read::line:
        return {RunVerdict::Kind::inconclusive, 0, "", "", "",
                "unexpected output after the final row: '" + leftover + "'"};
    case SutProcess::Read::timed_out:
        return {RunVerdict::Kind::inconclusive, 0, "", "", "",
                "timeout waiting for the SUT to finish"};
    case SutProcess::Read::error:
        return {RunVerdict::Kind::inconclusive, 0, "", "", "", "read error"};
    }
    return {};
}

std::string mutation_operator_name(MutationOperator op) {
    switch (op) {
    case MutationOperator::guard_op_flip: return "op-flip";
    case MutationOperator::guard_constant_perturb: return "const-perturb";
    case MutationOperator::assignment_value_swap: return "value-swap";
    case MutationOperator::atom_side_swap: return "side-swap";
    case MutationOperator::entry_delete: return "entry-delete";
    }
    return "?";
}

namespace {

BExp* atom_at(FunctionEntry& entry, std::size_t index) {
    std::size_t k = 0;
    for (Cnf* guard : {&entry.static_guard, &entry.timed_guard}) {
        for (Disj& clause : guard->clauses) {
            for (BExp& atom : clause.atoms) {
                if (k == index) return &atom;
                ++k;
            }
        }
    }
    return nullptr;
}

std::size_t atom_count(const FunctionEntry& entry) {
    std::size_t k = 0;
    for (const Cnf* guard : {&entry.static_guard, &entry.timed_guard})
        for (const Disj& clause : guard->clauses) k += clause.atoms.size();
    return k;
}

CmpOp flip_op(CmpOp op) {
    switch (op) {
    case CmpOp::eq: return CmpOp::neq;
    case CmpOp::neq: return CmpOp::eq;
    case CmpOp::lt: return CmpOp::ge;
    case CmpOp::ge: return CmpOp::lt;
    case CmpOp::gt: return CmpOp::le;
    case CmpOp::le: return CmpOp::gt;
    }
    return op;
}

/// Distinct values the model mentions for a variable, in first-seen order:
/// the initial pair, assignment values and guard constants.
std::vector<Value> value_pool(const SDfrs& model, const std::string& var) {
    std::vector<Value> pool;
    auto push = [&](const Value& v) {
        if (std::find(pool.begin(), pool.end(), v) == pool.end()) pool.push_back(v);
    };
    if (model.initial.contains(var)) {
        push(model.initial.at(var).previous);
        push(model.initial.at(var).current);
    }
    for (const auto& component : model.functions.components) {
        for (const FunctionEntry& entry : component) {
            for (const Cnf* guard : {&entry.static_guard, &entry.timed_guard})
                for (const Disj& clause : guard->clauses)
                    for (const BExp& atom : clause.atoms)
                        if (atom.var == var && atom.side != Side::elapsed) push(atom.rhs);
            for (const Asgmt& a : entry.assignments)
                if (a.target == var && !a.is_reset()) push(*a.value);
        }
    }
    return pool;
}

Value perturb(const Value& v, int delta) {
    if (v.type() == Type::integer) return Value::integer(v.as_int() + delta);
    return Value::natural(v.as_int() + delta); // throws below zero
}

} // namespace

SDfrs apply_mutant(const SDfrs& model, const Mutant& m) {
    SDfrs out = model;
    auto& component = out.functions.components.at(m.component);
    if (m.op == MutationOperator::entry_delete) {
        component.erase(component.begin() + static_cast<std::ptrdiff_t>(m.entry));
        return out;
    }
    FunctionEntry& entry = component.at(m.entry);
    switch (m.op) {
    case MutationOperator::guard_op_flip: {
        BExp* atom = atom_at(entry, m.index);
        if (!atom) throw Error(Error::Kind::invalid_value, "mutant atom index out of range");
        atom->op = flip_op(atom->op);
        break;
    }
    case MutationOperator::guard_constant_perturb: {
        BExp* atom = atom_at(entry, m.index);
        if (!atom) throw Error(Error::Kind::invalid_value, "mutant atom index out of range");
        atom->rhs = perturb(atom->rhs, m.detail);
        break;
    }
    case MutationOperator::atom_side_swap: {
        BExp* atom = atom_at(entry, m.index);
        if (!atom) throw Error(Error::Kind::invalid_value, "mutant atom index out of range");
        atom->side = atom->side == Side::previous ? Side::current : Side::previous;
        break;
    }
    case MutationOperator::assignment_value_swap: {
        Asgmt& a = entry.assignments.at(m.index);
        std::vector<Value> pool = value_pool(model, a.target);
        auto it = std::find(pool.begin(), pool.end(), *a.value);
        std::size_t at = it == pool.end() ? 0 : static_cast<std::size_t>(it - pool.begin());
        a.value = pool[(at + 1) % pool.size()];
        break;
    }
    case MutationOperator::entry_delete: break; // handled above
    }
    return out;
}

MutantSet generate_mutants(const SDfrs& model, std::uint64_t seed, std::size_t max) {
    MutantSet set;
    auto consider = [&](Mutant m) {
        ++set.attempted;
        try {
            SDfrs mutated = apply_mutant(model, m);
            if (!check_sdfrs(mutated).ok()) {
                ++set.discarded;
                return;
            }
        } catch (const Error&) {
            ++set.discarded;
            return;
        }
        set.mutants.push_back(std::move(m));
    };

    for (std::size_t c = 0; c < model.functions.components.size(); ++c) {
        const auto& component = model.functions.components[c];
        for (std::size_t e = 0; e < component.size(); ++e) {
            const FunctionEntry& entry = component[e];
            std::string at = "@c" + std::to_string(c) + ".e" + std::to_string(e);
            std::size_t atoms = atom_count(entry);
            for (std::size_t i = 0; i < atoms; ++i) {
                FunctionEntry probe = entry;
                const BExp& atom = *atom_at(probe, i);
                std::string loc = at + ".atom" + std::to_string(i);
                consider({"op-flip" + loc, MutationOperator::guard_op_flip, c, e, i, 0});
                if (atom.rhs.is_numeric()) {
                    consider({"const+1" + loc, MutationOperator::guard_constant_perturb, c, e,
                              i, +1});
                    consider({"const-1" + loc, MutationOperator::guard_constant_perturb, c, e,
                              i, -1});
                }
                if (atom.side != Side::elapsed)
                    consider({"side-swap" + loc, MutationOperator::atom_side_swap, c, e, i, 0});
            }
            for (std::size_t a = 0; a < entry.assignments.size(); ++a) {
                const Asgmt& asgmt = entry.assignments[a];
                if (asgmt.is_reset()) continue;
                if (value_pool(model, asgmt.target).size() < 2) continue;
                consider({"value-swap" + at + ".asgmt" + std::to_string(a),
                          MutationOperator::assignment_value_swap, c, e, a, 0});
            }
            consider({"entry-delete" + at, MutationOperator::entry_delete, c, e, 0, 0});
        }
    }

    // Deterministic Fisher-Yates, then truncate to max.
    SplitMix64 rng(seed);
    for (std::size_t i = set.mutants.size(); i > 1; --i) {
        std::size_t j = rng.below(i);
        std::swap(set.mutants[i - 1], set.mutants[j]);
    }
    if (set.mutants.size() > max) set.mutants.resize(max);
    return set;
}

namespace {

constexpr std::size_t kReactionChainBound = 16;

// Runs the variant over the stimulus timeline of an expected table. Returns
// true on divergence (including reactions that fail to settle). When several
// entries react at once the simulator takes the first in declaration order.
bool table_kills(const SDfrs& variant, const TestDataTable& table) {
    const std::string& clock = variant.variables.clock.name;
    State state = variant.initial;

    auto settle = [&](State s) -> std::optional<State> {
        for (std::size_t i = 0; i <= kReactionChainBound; ++i) {
            std::vector<FunctionEntry> enabled = enabled_entries(s, variant);
            if (enabled.empty()) return s;
            if (i == kReactionChainBound) return std::nullopt;
            s = apply_asgmts(s, enabled.front().assignments);
        }
        return std::nullopt;
    };

    auto outputs_match = [&](const State& s, const TestDataTable::Row& row) {
        for (std::size_t c = 0; c < table.output_names.size(); ++c)
            if (!(s.at(table.output_names[c]).current == row.outputs[c])) return false;
        return true;
    };

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const TestDataTable::Row& row = table.rows[r];
        if (r > 0) {
            std::int64_t delta = row.time - table.rows[r - 1].time;
            State next = state;
            const ValuePair& gc = state.at(clock);
            next.set(clock, ValuePair{gc.current, Value::natural(gc.current.as_int() + delta)});
            for (std::size_t c = 0; c < table.input_names.size(); ++c) {
                const ValuePair& old = state.at(table.input_names[c]);
                next.set(table.input_names[c], ValuePair{old.current, row.inputs[c]});
            }
            state = std::move(next);
        }
        std::optional<State> settled = settle(state);
        if (!settled) return true; // reaction livelock: observable divergence
        state = std::move(*settled);
        if (!outputs_match(state, row)) return true;
    }
    return false;
}

} // namespace

bool suite_kills(const Model& original, const SDfrs& variant, const std::vector<Trace>& suite) {
    for (const Trace& trace : suite) {
        if (table_kills(variant, export_table(original, trace))) return true;
    }
    return false;
}

MutationReport mutation_score(const Model& model, const MutantSet& mutants,
                              const std::vector<Trace>& suite) {
    MutationReport report;
    report.total = mutants.attempted;
    report.discarded = mutants.discarded;

    std::vector<TestDataTable> tables;
    tables.reserve(suite.size());
    for (const Trace& trace : suite) tables.push_back(export_table(model, trace));

    for (const Mutant& m : mutants.mutants) {
        SDfrs variant = apply_mutant(model.sdfrs, m);
        bool killed = std::any_of(tables.begin(), tables.end(), [&](const TestDataTable& t) {
            return table_kills(variant, t);
        });
        if (killed)
            ++report.killed;
        else
            report.survivors.push_back(m.id);
    }

    std::size_t evaluated = mutants.mutants.size();
    report.score = evaluated == 0 ? 0.0 : static_cast<double>(report.killed) /
                                              static_cast<double>(evaluated);
    return report;
}

std::string MutationReport::to_string() const {
    char score_buf[16];
    std::snprintf(score_buf, sizeof score_buf, "%.4f", score);
    std::string out;
    out += "mutants attempted : " + std::to_string(total) + "\n";
    out += "ill-formed        : " + std::to_string(discarded) + "\n";
    out += "killed            : " + std::to_string(killed) + "\n";
    out += "surviving         : " + std::to_string(survivors.size()) + "\n";
    out += "score             : " + std::string(score_buf) + "\n";
    if (!survivors.empty()) {
        out += "survivor ids      :";
        for (const std::string& id : survivors) out += " " + id;
        out += "\n";
    }
    return out;
}

} // namespace dfrs
