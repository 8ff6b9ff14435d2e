#include "basicwalk/traps.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "basicwalk/error.hpp"
#include "basicwalk/walker.hpp"

namespace basicwalk {

namespace {

template <class... F>
struct overloaded : F... {
    using F::operator()...;
};
template <class... F>
overloaded(F...) -> overloaded<F...>;

[[noreturn]] void malformed(const std::string& why) { throw Error(ErrorCode::malformed_kind, why); }

}  // namespace

std::string trap_name(const TrapKind& kind) {
    return std::visit(overloaded{
                          [](const TLattice&) -> std::string { return "t-lattice"; },
                          [](const SpireHex&) -> std::string { return "spire-hex"; },
                          [](const StarCv&) -> std::string { return "star-cv"; },
                          [](const StraightPath&) -> std::string { return "straight-path"; },
                      },
                      kind);
}

void validate_trap(const TrapKind& kind) {
    std::visit(overloaded{
                   [](const TLattice& t) {
                       if (t.d < 2 || t.d > 64) malformed("t-lattice needs 2 <= d <= 64");
                   },
                   [](const SpireHex&) {},
                   [](const StarCv& s) {
                       if (s.deg_v < 1) malformed("star-cv needs deg_v >= 1");
                       if (s.neighbor_degrees.size() > s.deg_v) malformed("star-cv: more neighbors than deg_v");
                       for (auto d : s.neighbor_degrees)
                           if (d < 1) malformed("star-cv: neighbor degrees must be >= 1");
                   },
                   [](const StraightPath& p) {
                       if (p.d < 1) malformed("straight-path needs d >= 1");
                       if (p.n < 1) malformed("straight-path needs n >= 1");
                   },
               },
               kind);
}

Rational analytic_trap_probability(const TrapKind& kind) {
    validate_trap(kind);
    return std::visit(overloaded{
                          [](const TLattice& t) {
                              // each of the d neighbours returns by one specific port: (1/2d)^d;
                              // the d exits at v are successive draws from 2d, 2d-1, ..., d+1 free slots
                              const unsigned long two_d = 2UL * static_cast<unsigned long>(t.d);
                              Rational c = Rational::pow(Rational(1, two_d), static_cast<std::uint64_t>(t.d));
                              for (unsigned long k = static_cast<unsigned long>(t.d) + 1; k <= two_d; ++k)
                                  c *= Rational(1, k);
                              return c;
                          },
                          [](const SpireHex&) { return Rational::pow(Rational(1, 3), 3) * Rational::pow(Rational(1, 2), 3); },
                          [](const StarCv& s) {
                              Rational c(1, s.deg_v);
                              for (auto d : s.neighbor_degrees) c *= Rational(1, d);
                              return c;
                          },
                          [](const StraightPath& p) { return Rational::pow(Rational(1, p.d), p.n); },
                      },
                      kind);
}

ShellBounds shell_bounds(const Rational& p) {
    if (!(p > Rational(0)) || !(p < Rational(1)))
        throw Error(ErrorCode::probability_out_of_range, "trap probability " + p.str() + " not in (0, 1)");
    const Rational shells = Rational(1) / p;
    return ShellBounds{shells, shells + Rational(2), shells * shells + Rational(2)};
}

std::optional<RealizedTrap> detect_realized_trap(const GraphFamily& g, const PortLabeling& labeling,
                                                 const VertexRef& v, Port next_port, std::uint64_t max_steps) {
    const Degree dv = degree(g, v);
    if (next_port < 1 || next_port > dv) return std::nullopt;

    // forced completions made during this simulation, on top of `labeling`
    std::unordered_map<VertexRef, std::vector<std::pair<Port, Slot>>, VertexRefHash> overlay;
    auto exit_slot = [&](const VertexRef& u, Port p) -> std::optional<Slot> {
        if (auto s = labeling.bound_slot(u, p)) return s;
        auto& extra = overlay[u];
        for (auto [q, s] : extra)
            if (q == p) return s;
        const Degree du = degree(g, u);
        if (labeling.bound_count(u) + extra.size() + 1 != du) return std::nullopt;
        for (Slot s = 1; s <= du; ++s) {
            if (labeling.port_of_slot(u, s)) continue;
            if (std::any_of(extra.begin(), extra.end(), [&](const auto& e) { return e.second == s; })) continue;
            extra.emplace_back(p, s);
            return s;
        }
        return std::nullopt;
    };

    std::unordered_map<WalkState, std::uint64_t, WalkStateHash> seen;
    std::vector<WalkState> states{WalkState{v, next_port}};
    seen.emplace(states.back(), 0);
    for (std::uint64_t t = 0; t < max_steps; ++t) {
        const auto& cur = states.back();
        const auto slot = exit_slot(cur.position, cur.next_port);
        if (!slot) return std::nullopt;
        VertexRef w = neighbor(g, cur.position, *slot);
        const Port np = cur.next_port % degree(g, w) + 1;
        WalkState nxt{std::move(w), np};
        auto [it, inserted] = seen.emplace(nxt, t + 1);
        if (!inserted) {
            RealizedTrap trap;
            trap.tail = it->second;
            trap.period = t + 1 - it->second;
            std::unordered_set<VertexRef, VertexRefHash> in_region;
            for (const auto& s : states)
                if (in_region.insert(s.position).second) trap.region.push_back(s.position);

            std::vector<VertexRef> cyc;
            for (auto k = trap.tail; k < states.size(); ++k) cyc.push_back(states[k].position);
            auto at_v = std::find(cyc.begin(), cyc.end(), v);
            if (at_v != cyc.end()) {
                std::rotate(cyc.begin(), at_v, cyc.end());
                const std::size_t P = cyc.size();
                bool in_closed_nbhd = true;
                for (const auto& u : cyc) in_closed_nbhd = in_closed_nbhd && (u == v || slot_toward(g, v, u) != 0);

                if (g.kind() == FamilyKind::lattice && P == 2 * static_cast<std::size_t>(g.dimension())) {
                    bool alternating = true;
                    std::vector<VertexRef> nbrs;
                    for (std::size_t k = 0; k < P; ++k) {
                        if (k % 2 == 0) alternating = alternating && cyc[k] == v;
                        else nbrs.push_back(cyc[k]);
                    }
                    auto sorted = nbrs;
                    std::sort(sorted.begin(), sorted.end());
                    const bool distinct = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
                    // some axis along which no trap neighbour moves: they share a hyperplane through v
                    bool hyperplane = false;
                    for (int axis = 0; axis < g.dimension() && !hyperplane; ++axis) {
                        bool free_axis = true;
                        for (const auto& u : nbrs) free_axis = free_axis && u[axis] == v[axis];
                        hyperplane = free_axis;
                    }
                    if (alternating && distinct && hyperplane) {
                        trap.kind = TLattice{g.dimension()};
                        return trap;
                    }
                }
                if (in_closed_nbhd) {
                    StarCv s{dv, {}};
                    std::unordered_set<VertexRef, VertexRefHash> counted;
                    for (const auto& u : cyc)
                        if (!(u == v) && counted.insert(u).second) s.neighbor_degrees.push_back(degree(g, u));
                    trap.kind = s;
                    return trap;
                }
                if (g.kind() == FamilyKind::hex && P % 2 == 0) {
                    bool out_and_back = true;
                    for (std::size_t k = 1; k < P; ++k) out_and_back = out_and_back && cyc[k] == cyc[P - k];
                    if (out_and_back) trap.kind = SpireHex{};
                }
            }
            return trap;
        }
        states.push_back(std::move(nxt));
    }
    return std::nullopt;
}

Rational forced_path_probability(const GraphFamily& g, const VertexRef& start, Port init_port,
                                 const std::vector<VertexRef>& path) {
    if (path.empty() || !(path.front() == start))
        throw Error(ErrorCode::invalid_argument, "path must begin at the start vertex");
    const Degree d0 = degree(g, start);
    if (init_port < 1 || init_port > d0) throw Error(ErrorCode::invalid_init_port, "init port out of range");
    PortLabeling lab(g, LazyUniform{});
    Rational p(1);
    Port port = init_port;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const auto& u = path[k];
        const Slot want = slot_toward(g, u, path[k + 1]);
        if (want == 0) return Rational(0);
        if (auto s = lab.bound_slot(u, port)) {
            if (*s != want) return Rational(0);
        } else {
            if (lab.port_of_slot(u, want)) return Rational(0);
            p *= Rational(1, degree(g, u) - lab.bound_count(u));
            lab.bind(u, port, want);
        }
        port = port % degree(g, path[k + 1]) + 1;
    }
    return p;
}

}  // namespace basicwalk
