#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <variant>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "basicwalk/graph.hpp"
#include "basicwalk/rng.hpp"

namespace basicwalk {

// Every edge {x, x+1} of Z carries label 1 if x is even, else 2, on both arcs.
struct AlternatingZ1 {};

// Shared edge labels on Z^2: vertical edge (x,y)-(x,y+1) gets 1 for even y and
// 3 for odd y; horizontal edge (x,y)-(x+1,y) gets 4 for even x and 2 for odd x.
struct StaircaseZ2 {};

// Square spiral (stretch 1) around a center: ring r starts at center+(r, 1-r)
// and runs up, left, down, right. A walk started at the center with
// init_port follows the spiral.
struct SpiralZ2 {
    std::int64_t cx = 0;
    std::int64_t cy = 0;
    Port init_port = 1;
};

// Explicit total port table for a finite graph: port_to_slot[v][p-1].
struct FixtureFinite {
    std::shared_ptr<const std::vector<std::vector<Slot>>> port_to_slot;
};

using DeterministicScheme = std::variant<AlternatingZ1, StaircaseZ2, SpiralZ2, FixtureFinite>;

struct LazyUniform {};
struct FullUniform {};
struct Deterministic {
    DeterministicScheme scheme;
};

using LabelingMode = std::variant<LazyUniform, FullUniform, Deterministic>;

std::string mode_name(const LabelingMode& mode);

// Throws scheme_graph_mismatch if the scheme cannot label g.
void check_scheme_compatible(const DeterministicScheme& scheme, const GraphFamily& g);

// Slot carrying `port` at v under the scheme. Never random.
Slot deterministic_label(const DeterministicScheme& scheme, const GraphFamily& g, const VertexRef& v, Port port);

// Index of (x, y) along the square spiral centred at the origin.
std::uint64_t spiral_index(std::int64_t x, std::int64_t y);

// Sparse partial bijection port <-> slot per vertex. Finite graphs use a dense
// per-index table, infinite ones a hash map of touched vertices only.
class PortLabeling {
public:
    explicit PortLabeling(GraphFamily g, LabelingMode mode = LazyUniform{});

    const GraphFamily& graph() const noexcept { return g_; }
    const LabelingMode& mode() const noexcept { return mode_; }

    std::optional<Slot> bound_slot(const VertexRef& v, Port port) const;
    std::optional<Port> port_of_slot(const VertexRef& v, Slot slot) const;
    std::size_t bound_count(const VertexRef& v) const;

    // Installs port -> slot at v. Throws if either side is already bound differently.
    void bind(const VertexRef& v, Port port, Slot slot);

    // Bound slot if present; otherwise draws (lazy / full modes) or consults
    // the scheme (deterministic), binds and returns. Deterministic resolution
    // and already-bound ports consume no randomness.
    Slot resolve_exit_slot(const VertexRef& v, Port port, Rng& rng);

    // true iff the last resolve_exit_slot call created a binding
    bool last_was_fresh() const noexcept { return last_fresh_; }
    std::uint64_t fresh_bindings() const noexcept { return fresh_; }
    // resolutions that consumed at least one random draw
    std::uint64_t random_resolutions() const noexcept { return random_; }

    // All bindings, sorted by (vertex, port).
    std::vector<std::tuple<VertexRef, Port, Slot>> bindings() const;

    // Asserts the partial-bijection invariant everywhere. Throws no_free_slot on corruption.
    void check_invariants() const;

private:
    struct Entry {
        boost::container::small_vector<std::pair<Port, Slot>, 4> by_port;  // sorted by port
        boost::container::small_vector<Slot, 4> slots;                      // sorted
    };

    const Entry* find(const VertexRef& v) const;
    Entry& entry(const VertexRef& v);
    static void insert(Entry& e, Port port, Slot slot);

    GraphFamily g_;
    LabelingMode mode_;
    bool dense_ = false;
    std::vector<Entry> dense_entries_;
    std::unordered_map<VertexRef, Entry, VertexRefHash> sparse_entries_;
    std::uint64_t fresh_ = 0;
    std::uint64_t random_ = 0;
    bool last_fresh_ = false;
};

// Spec-shaped wrapper: g must be the labeling's graph.
Slot resolve_exit_slot(PortLabeling& labeling, const GraphFamily& g, const VertexRef& v, Port port, Rng& rng);

// Independent uniform permutation port <-> slot at every vertex, vertices in
// index order, Fisher-Yates per vertex. Throws infinite_family.
PortLabeling full_uniform_labeling(const GraphFamily& g, Rng& rng);

// Fixture text: one line per vertex "<id>: 1->n1 2->n2 ..." ('#' comments,
// optional "n <count>" header). Ports not listed are completed canonically.
FixtureFinite parse_fixture(const GraphFamily& g, std::string_view text);
std::string format_fixture(const GraphFamily& g, const FixtureFinite& fixture);

// Total fixture extending the labeling's bindings: at each vertex, unbound
// ports take the unbound slots in increasing order.
FixtureFinite complete_fixture(const PortLabeling& labeling);

}  // namespace basicwalk
