#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dfrs/expansion.hpp"
#include "dfrs/model.hpp"
#include "dfrs/rng.hpp"

namespace dfrs {

struct TraceStep {
    TransLabel label;
    State resulting;

    bool operator==(const TraceStep&) const = default;
};

/// A replayable run of the model: the label sequence with the state reached
/// after each step, plus the seed that produced it and the id of the model it
/// belongs to.
struct Trace {
    std::vector<TraceStep> steps;
    std::uint64_t seed = 0;
    std::string model_id;

    bool operator==(const Trace&) const = default;
};

/// Stable identifier derived from the model content.
std::string model_id(const Model& model);

/// The per-step stop draw: stop with weight 1 against weight `remaining` for
/// continuing, i.e. stop probability 1 / (1 + remaining).
bool stop_draw(SplitMix64& rng, std::uint64_t remaining);

/// Random valid trace of at most `size` steps. Starting from the initial
/// state, each round first computes the outgoing transitions, then either
/// stops (weight 1) or takes one transition chosen uniformly (weight equal to
/// the remaining size). Size 0 yields the empty trace.
///
/// Throws Error(dead_state) when a state with no outgoing transitions is hit
/// before stopping, and Error(inconsistent_model) when the model fails
/// check_sdfrs.
Trace gen_valid_trace(const Model& model, std::uint64_t size, std::uint64_t seed);

/// 11 traces per call, mirroring the default sampling batch size; trace i
/// uses the sub-seed derived from (seed, i), so results do not depend on
/// scheduling or on each other.
std::vector<Trace> sample(const Model& model, std::uint64_t calls, std::uint64_t size,
                          std::uint64_t seed);

struct ReplayFailure {
    std::size_t step = 0;
    std::string reason;
};

struct ReplayVerdict {
    std::optional<ReplayFailure> failure;

    bool valid() const { return !failure.has_value(); }
};

/// Replays the trace from the initial state. Every label must be one of the
/// transitions the model generates at that point and the recorded resulting
/// state must match the transition target exactly.
ReplayVerdict validate_trace(const Model& model, const Trace& trace);

/// Tabular test data: one row per time instant with the quiescent (post
/// reaction) current values of the inputs and outputs.
struct TestDataTable {
    struct Row {
        std::int64_t time = 0;
        std::vector<Value> inputs;
        std::vector<Value> outputs;

        bool operator==(const Row&) const = default;
    };

    std::vector<std::string> input_names;
    std::vector<std::string> output_names;
    std::vector<Row> rows;

    bool operator==(const TestDataTable&) const = default;
};

/// Builds the test-data table of a valid trace: one row per distinct clock
/// value, each showing the values after all function transitions at that
/// instant have settled. A trace that stops between a delay and the reactions
/// it enables still exports a settled final row (the remaining reactions are
/// applied, first enabled entry each step). The empty trace exports the
/// single initial row. Throws Error(invalid_trace) when the trace does not
/// replay.
TestDataTable export_table(const Model& model, const Trace& trace);

struct CoverageReport {
    // Declared requirement ids in declaration order with their hit counts.
    std::vector<std::pair<std::string, std::size_t>> hits;
    std::vector<std::string> covered;
    std::vector<std::string> uncovered;
    std::size_t trace_count = 0;
    std::size_t distinct_traces = 0;
};

/// Counts function labels per requirement id over the traces and lists the
/// declared requirements never exercised. Duplicated traces are kept and
/// counted; distinct_traces reports how many differ.
/// Throws Error(invalid_trace) when some trace does not replay.
CoverageReport coverage(const Model& model, const std::vector<Trace>& traces);

} // namespace dfrs
