#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "basicwalk/graph.hpp"
#include "basicwalk/labeling.hpp"
#include "basicwalk/rng.hpp"

namespace basicwalk {

struct WalkState {
    VertexRef position;
    Port next_port = 1;

    friend bool operator==(const WalkState&, const WalkState&) = default;
};

struct WalkStateHash {
    std::size_t operator()(const WalkState& s) const noexcept {
        return s.position.hash() ^ mix64(s.next_port + 0x632be59bd9b4e019ULL);
    }
};

struct Cycled {
    std::uint64_t tail = 0;
    std::uint64_t period = 0;
};
struct BudgetExhausted {};

using Classification = std::variant<Cycled, BudgetExhausted>;

struct WalkOutcome {
    Classification classification = BudgetExhausted{};
    // Cycled: index of the first repeated state (= tail + period). Otherwise the budget.
    std::uint64_t steps_taken = 0;
    std::uint64_t unique_vertices = 0;
    std::uint64_t unique_states = 0;
    std::uint64_t max_distance = 0;
    // every step strictly increased distance(g, .)
    bool monotone_escape = true;
    // number of leading steps that strictly increased distance
    std::uint64_t monotone_prefix = 0;
    std::uint64_t fresh_labels = 0;
    WalkState final_state;

    bool cycled() const noexcept { return std::holds_alternative<Cycled>(classification); }
    std::uint64_t tail() const noexcept { return cycled() ? std::get<Cycled>(classification).tail : 0; }
    std::uint64_t period() const noexcept { return cycled() ? std::get<Cycled>(classification).period : 0; }
};

struct TraceRow {
    std::uint64_t step = 0;
    VertexRef vertex;
    Port port = 0;
    Slot slot = 0;
    std::uint64_t distance = 0;
    bool new_label = false;
};

struct WalkOptions {
    bool record_trace = false;
};

// One automaton transition (v, i) -> (w, (i mod deg w) + 1). Binds at most one label.
WalkState step(const GraphFamily& g, PortLabeling& labeling, const WalkState& state, Rng& rng);

// Runs from (start, init_port) until the first repeated state or `budget` steps.
WalkOutcome run_basic_walk(const GraphFamily& g, PortLabeling& labeling, const VertexRef& start, Port init_port,
                           std::uint64_t budget, Rng& rng, const WalkOptions& opts = {},
                           std::vector<TraceRow>* trace = nullptr);

// Convenience: builds the labeling for `mode` (full mode draws the whole
// labeling first from the same stream) and runs.
WalkOutcome run_basic_walk(const GraphFamily& g, const LabelingMode& mode, const VertexRef& start, Port init_port,
                           std::uint64_t budget, std::uint64_t seed, const WalkOptions& opts = {},
                           std::vector<TraceRow>* trace = nullptr);

// Labeling for `mode` ready to walk. Full mode requires a finite graph.
PortLabeling make_labeling(const GraphFamily& g, const LabelingMode& mode, Rng& rng);

void write_trace_csv(std::ostream& out, const GraphFamily& g, const std::vector<TraceRow>& rows);

struct SimpleWalkStats {
    std::uint64_t steps = 0;
    std::uint64_t unique_vertices = 0;
    std::uint64_t max_distance = 0;
};

SimpleWalkStats run_simple_random_walk(const GraphFamily& g, const VertexRef& start, std::uint64_t budget,
                                       std::uint64_t seed);

// Rotor walk: each vertex owns a cyclic order of its slots and a rotor index.
// The k-th visit to v exits along order[(k-1) mod deg] (rotor advances after each exit).
struct RotorConfig {
    enum class Kind { canonical, uniform, explicit_orders };
    Kind kind = Kind::canonical;
    std::uint64_t seed = 0;
    // explicit_orders: orders[u] is a permutation of 1..deg(u) (finite graphs)
    std::vector<std::vector<Slot>> orders;
    // full-state period detection only on finite graphs with at most this many vertices
    std::uint64_t period_detection_cap = 4096;
};

struct RotorOutcome {
    std::uint64_t steps = 0;
    std::uint64_t unique_vertices = 0;
    // eventual period of (position, rotors); the run stops once it is found
    std::optional<std::uint64_t> period;
    std::vector<VertexRef> path;          // only when requested
    bool budget_exhausted = true;
};

RotorOutcome run_rotor_walk(const GraphFamily& g, const RotorConfig& config, const VertexRef& start,
                            std::uint64_t budget, bool record_path = false);

// Cycle structure of a totally labeled finite graph. The automaton is a
// functional graph on (vertex, port) states; every state drains into a cycle.
struct CycleCensus {
    std::uint64_t states = 0;
    std::uint64_t cycles = 0;
    std::uint64_t longest_cycle_states = 0;    // longest period
    std::uint64_t longest_cycle_vertices = 0;  // most distinct vertices on one cycle
};

// Labeling must be total, or deterministic (resolved on demand).
CycleCensus cycle_census(PortLabeling& labeling);

}  // namespace basicwalk
