#include "basicwalk/labeling.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

#include "basicwalk/error.hpp"

namespace basicwalk {

namespace {

template <class... F>
struct overloaded : F... {
    using F::operator()...;
};
template <class... F>
overloaded(F...) -> overloaded<F...>;

void check_port(const GraphFamily& g, const VertexRef& v, Port port, Degree deg) {
    if (port < 1 || port > deg)
        throw Error(ErrorCode::port_out_of_range, "port " + std::to_string(port) + " not in [1, " +
                                                      std::to_string(deg) + "] at " + format_vertex(g, v));
}

std::int64_t alternating_edge_label(std::int64_t x) { return (x & 1) == 0 ? 1 : 2; }
Port vertical_label(std::int64_t y) { return (y & 1) == 0 ? 1 : 3; }
Port horizontal_label(std::int64_t x) { return (x & 1) == 0 ? 4 : 2; }

Slot spiral_label(const SpiralZ2& s, const GraphFamily& g, const VertexRef& v, Port port) {
    const std::int64_t x = v[0] - s.cx, y = v[1] - s.cy;
    const std::uint64_t t = spiral_index(x, y);
    // the walk reaches spiral step t using port ((init-1+t) mod 4)+1
    const Port walk_port = (s.init_port - 1 + t % 4) % 4 + 1;
    Slot forward = 0;
    for (Slot k = 1; k <= 4; ++k) {
        const auto w = neighbor(g, v, k);
        if (spiral_index(w[0] - s.cx, w[1] - s.cy) == t + 1) forward = k;
    }
    if (port == walk_port) return forward;
    // remaining ports take the remaining slots in increasing order
    Port rank = port < walk_port ? port : port - 1;
    for (Slot k = 1; k <= 4; ++k) {
        if (k == forward) continue;
        if (--rank == 0) return k;
    }
    return 0;
}

}  // namespace

std::uint64_t spiral_index(std::int64_t x, std::int64_t y) {
    const std::int64_t r = std::max(x < 0 ? -x : x, y < 0 ? -y : y);
    if (r == 0) return 0;
    const auto base = static_cast<std::uint64_t>((2 * r - 1) * (2 * r - 1));
    std::int64_t off;
    if (x == r && y > -r) off = y + r - 1;
    else if (y == r) off = 2 * r + (r - 1 - x);
    else if (x == -r) off = 4 * r + (r - 1 - y);
    else off = 6 * r + x + r - 1;
    return base + static_cast<std::uint64_t>(off);
}

std::string mode_name(const LabelingMode& mode) {
    return std::visit(overloaded{
                          [](const LazyUniform&) -> std::string { return "lazy"; },
                          [](const FullUniform&) -> std::string { return "full"; },
                          [](const Deterministic& d) -> std::string {
                              return std::visit(overloaded{
                                                    [](const AlternatingZ1&) -> std::string { return "alternating"; },
                                                    [](const StaircaseZ2&) -> std::string { return "staircase"; },
                                                    [](const SpiralZ2&) -> std::string { return "spiral"; },
                                                    [](const FixtureFinite&) -> std::string { return "fixture"; },
                                                },
                                                d.scheme);
                          },
                      },
                      mode);
}

void check_scheme_compatible(const DeterministicScheme& scheme, const GraphFamily& g) {
    auto mismatch = [&](const std::string& what) {
        throw Error(ErrorCode::scheme_graph_mismatch, what + " cannot label " + g.name());
    };
    std::visit(overloaded{
                   [&](const AlternatingZ1&) {
                       if (g.kind() != FamilyKind::lattice || g.dimension() != 1) mismatch("alternating (needs z1)");
                   },
                   [&](const StaircaseZ2&) {
                       if (g.kind() != FamilyKind::lattice || g.dimension() != 2) mismatch("staircase (needs z2)");
                   },
                   [&](const SpiralZ2& s) {
                       if (g.kind() != FamilyKind::lattice || g.dimension() != 2) mismatch("spiral (needs z2)");
                       if (s.init_port < 1 || s.init_port > 4)
                           throw Error(ErrorCode::invalid_init_port, "spiral init port must be in [1, 4]");
                   },
                   [&](const FixtureFinite& f) {
                       if (!g.is_finite() || !f.port_to_slot || f.port_to_slot->size() != g.vertex_count())
                           mismatch("fixture table");
                       for (std::uint64_t u = 0; u < g.vertex_count(); ++u)
                           if ((*f.port_to_slot)[u].size() != degree(g, VertexRef::index(u)))
                               mismatch("fixture table (degree of " + std::to_string(u) + ")");
                   },
               },
               scheme);
}

Slot deterministic_label(const DeterministicScheme& scheme, const GraphFamily& g, const VertexRef& v, Port port) {
    const Degree deg = degree(g, v);
    check_port(g, v, port, deg);
    return std::visit(overloaded{
                          [&](const AlternatingZ1&) -> Slot {
                              if (g.kind() != FamilyKind::lattice || g.dimension() != 1)
                                  check_scheme_compatible(scheme, g);
                              return static_cast<std::int64_t>(port) == alternating_edge_label(v[0]) ? 1 : 2;
                          },
                          [&](const StaircaseZ2&) -> Slot {
                              if (g.kind() != FamilyKind::lattice || g.dimension() != 2)
                                  check_scheme_compatible(scheme, g);
                              const auto x = v[0], y = v[1];
                              if (port == horizontal_label(x)) return 1;
                              if (port == horizontal_label(x - 1)) return 2;
                              if (port == vertical_label(y)) return 3;
                              return 4;
                          },
                          [&](const SpiralZ2& s) -> Slot {
                              if (g.kind() != FamilyKind::lattice || g.dimension() != 2)
                                  check_scheme_compatible(scheme, g);
                              return spiral_label(s, g, v, port);
                          },
                          [&](const FixtureFinite& f) -> Slot {
                              const auto u = static_cast<std::size_t>(v[0]);
                              if (!f.port_to_slot || u >= f.port_to_slot->size() ||
                                  (*f.port_to_slot)[u].size() != deg)
                                  check_scheme_compatible(scheme, g);
                              return (*f.port_to_slot)[u][port - 1];
                          },
                      },
                      scheme);
}

PortLabeling::PortLabeling(GraphFamily g, LabelingMode mode) : g_(std::move(g)), mode_(std::move(mode)) {
    if (auto* d = std::get_if<Deterministic>(&mode_)) check_scheme_compatible(d->scheme, g_);
    if (g_.is_finite()) {
        dense_ = true;
        dense_entries_.resize(g_.vertex_count());
    }
}

const PortLabeling::Entry* PortLabeling::find(const VertexRef& v) const {
    if (dense_) {
        validate_vertex(g_, v);
        return &dense_entries_[static_cast<std::size_t>(v[0])];
    }
    auto it = sparse_entries_.find(v);
    return it == sparse_entries_.end() ? nullptr : &it->second;
}

PortLabeling::Entry& PortLabeling::entry(const VertexRef& v) {
    if (dense_) return dense_entries_[static_cast<std::size_t>(v[0])];
    return sparse_entries_[v];
}

void PortLabeling::insert(Entry& e, Port port, Slot slot) {
    auto pit = std::lower_bound(e.by_port.begin(), e.by_port.end(), port,
                                [](const auto& a, Port p) { return a.first < p; });
    e.by_port.insert(pit, {port, slot});
    e.slots.insert(std::lower_bound(e.slots.begin(), e.slots.end(), slot), slot);
}

std::optional<Slot> PortLabeling::bound_slot(const VertexRef& v, Port port) const {
    const Entry* e = find(v);
    if (!e) return std::nullopt;
    auto it = std::lower_bound(e->by_port.begin(), e->by_port.end(), port,
                               [](const auto& a, Port p) { return a.first < p; });
    if (it == e->by_port.end() || it->first != port) return std::nullopt;
    return it->second;
}

std::optional<Port> PortLabeling::port_of_slot(const VertexRef& v, Slot slot) const {
    const Entry* e = find(v);
    if (!e) return std::nullopt;
    for (const auto& [p, s] : e->by_port)
        if (s == slot) return p;
    return std::nullopt;
}

std::size_t PortLabeling::bound_count(const VertexRef& v) const {
    const Entry* e = find(v);
    return e ? e->by_port.size() : 0;
}

void PortLabeling::bind(const VertexRef& v, Port port, Slot slot) {
    const Degree deg = degree(g_, v);
    check_port(g_, v, port, deg);
    if (slot < 1 || slot > deg)
        throw Error(ErrorCode::slot_out_of_range, "slot " + std::to_string(slot) + " at " + format_vertex(g_, v));
    if (auto s = bound_slot(v, port)) {
        if (*s == slot) return;
        throw Error(ErrorCode::invalid_argument, "port " + std::to_string(port) + " at " + format_vertex(g_, v) +
                                                     " already bound to slot " + std::to_string(*s));
    }
    Entry& e = entry(v);
    if (std::binary_search(e.slots.begin(), e.slots.end(), slot))
        throw Error(ErrorCode::invalid_argument,
                    "slot " + std::to_string(slot) + " at " + format_vertex(g_, v) + " already carries a port");
    insert(e, port, slot);
}

Slot PortLabeling::resolve_exit_slot(const VertexRef& v, Port port, Rng& rng) {
    const Degree deg = degree(g_, v);
    check_port(g_, v, port, deg);
    last_fresh_ = false;
    if (auto s = bound_slot(v, port)) return *s;

    Slot chosen = 0;
    if (auto* d = std::get_if<Deterministic>(&mode_)) {
        chosen = deterministic_label(d->scheme, g_, v, port);
    } else {
        const Entry* e = find(v);
        const std::size_t bound = e ? e->slots.size() : 0;
        if (bound >= deg)
            throw Error(ErrorCode::no_free_slot, "no free slot at " + format_vertex(g_, v) + " (labeling corrupt)");
        const Degree free = deg - bound;
        if (free > 1) ++random_;
        if (2 * bound >= deg) {
            // few free slots: enumerate them (deg <= 2*bound, so this is cheap)
            std::uint64_t pick = rng.uniform_below(free);
            std::size_t j = 0;
            for (Slot s = 1; s <= deg; ++s) {
                if (j < bound && e->slots[j] == s) {
                    ++j;
                    continue;
                }
                if (pick-- == 0) {
                    chosen = s;
                    break;
                }
            }
        } else {
            // rejection against the sparse bound set; at least half the slots are free
            do {
                chosen = rng.uniform_below(deg) + 1;
            } while (e && std::binary_search(e->slots.begin(), e->slots.end(), chosen));
        }
    }
    insert(entry(v), port, chosen);
    ++fresh_;
    last_fresh_ = true;
    return chosen;
}

std::vector<std::tuple<VertexRef, Port, Slot>> PortLabeling::bindings() const {
    std::vector<std::tuple<VertexRef, Port, Slot>> out;
    if (dense_) {
        for (std::size_t u = 0; u < dense_entries_.size(); ++u)
            for (const auto& [p, s] : dense_entries_[u].by_port) out.emplace_back(VertexRef::index(u), p, s);
        return out;
    }
    for (const auto& [v, e] : sparse_entries_)
        for (const auto& [p, s] : e.by_port) out.emplace_back(v, p, s);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) == std::get<0>(b)) return std::get<1>(a) < std::get<1>(b);
        return std::get<0>(a) < std::get<0>(b);
    });
    return out;
}

void PortLabeling::check_invariants() const {
    auto check = [&](const VertexRef& v, const Entry& e) {
        const Degree deg = degree(g_, v);
        auto corrupt = [&](const std::string& why) {
            throw Error(ErrorCode::no_free_slot, "labeling corrupt at " + format_vertex(g_, v) + ": " + why);
        };
        if (e.by_port.size() != e.slots.size() || e.by_port.size() > deg) corrupt("size mismatch");
        std::vector<Slot> slots;
        for (std::size_t k = 0; k < e.by_port.size(); ++k) {
            const auto [p, s] = e.by_port[k];
            if (p < 1 || p > deg || s < 1 || s > deg) corrupt("out of range");
            if (k && e.by_port[k - 1].first >= p) corrupt("ports not distinct");
            slots.push_back(s);
        }
        std::sort(slots.begin(), slots.end());
        if (std::adjacent_find(slots.begin(), slots.end()) != slots.end()) corrupt("slots not distinct");
        if (!std::equal(slots.begin(), slots.end(), e.slots.begin(), e.slots.end())) corrupt("slot index stale");
    };
    if (dense_) {
        for (std::size_t u = 0; u < dense_entries_.size(); ++u) check(VertexRef::index(u), dense_entries_[u]);
    } else {
        for (const auto& [v, e] : sparse_entries_) check(v, e);
    }
}

Slot resolve_exit_slot(PortLabeling& labeling, const GraphFamily& g, const VertexRef& v, Port port, Rng& rng) {
    if (g.name() != labeling.graph().name())
        throw Error(ErrorCode::invalid_argument, "labeling belongs to " + labeling.graph().name());
    return labeling.resolve_exit_slot(v, port, rng);
}

PortLabeling full_uniform_labeling(const GraphFamily& g, Rng& rng) {
    if (!g.is_finite()) throw Error(ErrorCode::infinite_family, "full labeling of " + g.name());
    PortLabeling lab(g, FullUniform{});
    std::vector<Slot> perm;
    for (std::uint64_t u = 0; u < g.vertex_count(); ++u) {
        const auto v = VertexRef::index(u);
        const Degree deg = degree(g, v);
        perm.resize(deg);
        std::iota(perm.begin(), perm.end(), Slot{1});
        for (std::size_t i = deg; i > 1; --i) std::swap(perm[i - 1], perm[rng.uniform_below(i)]);
        for (Port p = 1; p <= deg; ++p) lab.bind(v, p, perm[p - 1]);
    }
    return lab;
}

namespace {

FixtureFinite complete_partial(const GraphFamily& g, std::vector<std::vector<Slot>> table) {
    for (std::uint64_t u = 0; u < g.vertex_count(); ++u) {
        auto& row = table[u];
        std::vector<bool> used(row.size() + 1, false);
        for (auto s : row)
            if (s) used[s] = true;
        Slot next = 1;
        for (auto& s : row) {
            if (s) continue;
            while (used[next]) ++next;
            s = next;
            used[next] = true;
        }
    }
    return FixtureFinite{std::make_shared<const std::vector<std::vector<Slot>>>(std::move(table))};
}

}  // namespace

FixtureFinite parse_fixture(const GraphFamily& g, std::string_view text) {
    if (!g.is_finite()) throw Error(ErrorCode::scheme_graph_mismatch, "fixture tables need a finite graph");
    const auto n = g.vertex_count();
    std::vector<std::vector<Slot>> table(n);
    for (std::uint64_t u = 0; u < n; ++u) table[u].assign(degree(g, VertexRef::index(u)), 0);
    std::vector<bool> seen(n, false);

    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& why) {
        throw Error(ErrorCode::parse_error, "fixture line " + std::to_string(lineno) + ": " + why);
    };
    auto to_u64 = [&](std::string_view s, std::uint64_t& out) {
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc() && p == s.data() + s.size();
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head == "n") {
            std::uint64_t count = 0;
            if (!(ls >> count) || count != n) fail("header count does not match " + g.name());
            continue;
        }
        std::uint64_t id;
        if (head.back() != ':' || !to_u64(std::string_view(head).substr(0, head.size() - 1), id) || id >= n)
            fail("bad vertex id '" + head + "'");
        if (seen[id]) fail("vertex " + std::to_string(id) + " listed twice");
        seen[id] = true;
        const auto v = VertexRef::index(id);
        auto& row = table[id];
        std::vector<bool> slot_used(row.size() + 1, false);
        std::string tok;
        while (ls >> tok) {
            auto arrow = tok.find("->");
            std::uint64_t port, w;
            if (arrow == std::string::npos || !to_u64(std::string_view(tok).substr(0, arrow), port) ||
                !to_u64(std::string_view(tok).substr(arrow + 2), w))
                fail("expected port->neighbor, got '" + tok + "'");
            if (port < 1 || port > row.size()) fail("port " + std::to_string(port) + " out of range");
            if (row[port - 1]) fail("port " + std::to_string(port) + " assigned twice");
            if (w >= n) fail("neighbor " + std::to_string(w) + " out of range");
            const Slot s = slot_toward(g, v, VertexRef::index(w));
            if (s == 0) fail(std::to_string(w) + " is not a neighbor of " + std::to_string(id));
            if (slot_used[s]) fail("neighbor " + std::to_string(w) + " labeled twice");
            slot_used[s] = true;
            row[port - 1] = s;
        }
    }
    return complete_partial(g, std::move(table));
}

std::string format_fixture(const GraphFamily& g, const FixtureFinite& fixture) {
    check_scheme_compatible(fixture, g);
    std::ostringstream out;
    out << "n " << g.vertex_count() << "\n";
    for (std::uint64_t u = 0; u < g.vertex_count(); ++u) {
        const auto v = VertexRef::index(u);
        out << u << ":";
        const auto& row = (*fixture.port_to_slot)[u];
        for (Port p = 1; p <= row.size(); ++p) out << ' ' << p << "->" << neighbor(g, v, row[p - 1])[0];
        out << "\n";
    }
    return out.str();
}

FixtureFinite complete_fixture(const PortLabeling& labeling) {
    const auto& g = labeling.graph();
    if (!g.is_finite()) throw Error(ErrorCode::infinite_family, "fixture of " + g.name());
    std::vector<std::vector<Slot>> table(g.vertex_count());
    for (std::uint64_t u = 0; u < g.vertex_count(); ++u) table[u].assign(degree(g, VertexRef::index(u)), 0);
    for (const auto& [v, p, s] : labeling.bindings()) table[static_cast<std::size_t>(v[0])][p - 1] = s;
    return complete_partial(g, std::move(table));
}

}  // namespace basicwalk
