#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "basicwalk/graph.hpp"
#include "basicwalk/labeling.hpp"
#include "basicwalk/rational.hpp"

namespace basicwalk {

// T on Z^2 and its generalization T_d on Z^d: v, then d neighbours on a
// hyperplane through v, visited out-and-back; the cycle has period 2d.
struct TLattice {
    int d = 2;
};
// out-and-back path trap on the hexagonal lattice
struct SpireHex {};
// closed-neighbourhood trap at v: every used neighbour sends the walk straight back
struct StarCv {
    Degree deg_v = 1;
    std::vector<Degree> neighbor_degrees;
};
// n consecutive outward steps, each a specific one of d arcs
struct StraightPath {
    Degree d = 2;
    std::uint64_t n = 1;
};

using TrapKind = std::variant<TLattice, SpireHex, StarCv, StraightPath>;

std::string trap_name(const TrapKind& kind);

// Throws malformed_kind.
void validate_trap(const TrapKind& kind);

Rational analytic_trap_probability(const TrapKind& kind);

struct ShellBounds {
    Rational expected_shells;
    Rational straight_line_bound;
    Rational spiral_bound;
};

// 1/p shells until the first trap, +2 for the straight-line walk, (1/p)^2 + 2
// vertices for a walk confined to the spiral. Requires 0 < p < 1.
ShellBounds shell_bounds(const Rational& trap_prob);

struct RealizedTrap {
    // nullopt: a forced cycle that matches none of the named kinds
    std::optional<TrapKind> kind;
    std::uint64_t tail = 0;
    std::uint64_t period = 0;
    // every vertex the forced trajectory ever occupies
    std::vector<VertexRef> region;
};

// Follows the automaton from (v, next_port) using only labels that are bound,
// or forced (the port is the last unbound one at its vertex). Returns the trap
// iff this reaches a repeated state: any completion of the labeling then keeps
// the walk inside `region` forever. None if an unforced label is needed first
// or max_steps run out.
std::optional<RealizedTrap> detect_realized_trap(const GraphFamily& g, const PortLabeling& labeling,
                                                 const VertexRef& v, Port next_port, std::uint64_t max_steps = 4096);

// Probability that a fresh lazy labeling sends the walk from (start, init_port)
// along `path` (path[0] == start), step by step. Exact.
Rational forced_path_probability(const GraphFamily& g, const VertexRef& start, Port init_port,
                                 const std::vector<VertexRef>& path);

}  // namespace basicwalk
