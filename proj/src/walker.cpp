#include "basicwalk/walker.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "basicwalk/error.hpp"

namespace basicwalk {

WalkState step(const GraphFamily& g, PortLabeling& labeling, const WalkState& state, Rng& rng) {
    const Slot slot = labeling.resolve_exit_slot(state.position, state.next_port, rng);
    VertexRef w = neighbor(g, state.position, slot);
    const Degree dw = degree(g, w);
    const Port next = state.next_port % dw + 1;
    return WalkState{std::move(w), next};
}

PortLabeling make_labeling(const GraphFamily& g, const LabelingMode& mode, Rng& rng) {
    if (std::holds_alternative<FullUniform>(mode)) return full_uniform_labeling(g, rng);
    return PortLabeling(g, mode);
}

WalkOutcome run_basic_walk(const GraphFamily& g, PortLabeling& labeling, const VertexRef& start, Port init_port,
                           std::uint64_t budget, Rng& rng, const WalkOptions& opts, std::vector<TraceRow>* trace) {
    if (budget == 0) throw Error(ErrorCode::budget_zero, "walk budget must be >= 1");
    const Degree d0 = degree(g, start);
    if (init_port < 1 || init_port > d0)
        throw Error(ErrorCode::invalid_init_port,
                    "init port " + std::to_string(init_port) + " not in [1, " + std::to_string(d0) + "]");

    WalkOutcome out;
    std::unordered_map<WalkState, std::uint64_t, WalkStateHash> first_seen;
    std::unordered_set<VertexRef, VertexRefHash> vertices;
    WalkState cur{start, init_port};
    first_seen.emplace(cur, 0);
    vertices.insert(start);
    std::uint64_t dist = distance(g, start);
    out.max_distance = dist;
    const std::uint64_t fresh_before = labeling.fresh_bindings();
    bool monotone = true;

    std::uint64_t t = 0;
    while (t < budget) {
        const Slot slot = labeling.resolve_exit_slot(cur.position, cur.next_port, rng);
        if (opts.record_trace && trace)
            trace->push_back(TraceRow{t, cur.position, cur.next_port, slot, dist, labeling.last_was_fresh()});
        VertexRef w = neighbor(g, cur.position, slot);
        const Port next = cur.next_port % degree(g, w) + 1;
        const std::uint64_t wd = distance(g, w);
        if (monotone && wd > dist) ++out.monotone_prefix;
        else monotone = false;
        dist = wd;
        out.max_distance = std::max(out.max_distance, wd);
        vertices.insert(w);
        cur = WalkState{std::move(w), next};
        ++t;
        auto [it, inserted] = first_seen.emplace(cur, t);
        if (!inserted) {
            out.classification = Cycled{it->second, t - it->second};
            break;
        }
    }
    out.steps_taken = t;
    out.unique_states = out.cycled() ? t : first_seen.size() - 1;
    out.unique_vertices = vertices.size();
    out.monotone_escape = monotone;
    out.fresh_labels = labeling.fresh_bindings() - fresh_before;
    out.final_state = std::move(cur);
    return out;
}

WalkOutcome run_basic_walk(const GraphFamily& g, const LabelingMode& mode, const VertexRef& start, Port init_port,
                           std::uint64_t budget, std::uint64_t seed, const WalkOptions& opts,
                           std::vector<TraceRow>* trace) {
    Rng rng(seed);
    PortLabeling labeling = make_labeling(g, mode, rng);
    return run_basic_walk(g, labeling, start, init_port, budget, rng, opts, trace);
}

void write_trace_csv(std::ostream& out, const GraphFamily& g, const std::vector<TraceRow>& rows) {
    out << "step,vertex,port,slot,distance,new_label\n";
    for (const auto& r : rows)
        out << r.step << ',' << format_vertex(g, r.vertex) << ',' << r.port << ',' << r.slot << ',' << r.distance
            << ',' << (r.new_label ? "true" : "false") << '\n';
}

SimpleWalkStats run_simple_random_walk(const GraphFamily& g, const VertexRef& start, std::uint64_t budget,
                                       std::uint64_t seed) {
    if (budget == 0) throw Error(ErrorCode::budget_zero, "walk budget must be >= 1");
    Rng rng(seed);
    std::unordered_set<VertexRef, VertexRefHash> seen{start};
    SimpleWalkStats s;
    VertexRef v = start;
    s.max_distance = distance(g, v);
    for (std::uint64_t t = 0; t < budget; ++t) {
        v = neighbor(g, v, rng.uniform_below(degree(g, v)) + 1);
        seen.insert(v);
        s.max_distance = std::max(s.max_distance, distance(g, v));
    }
    s.steps = budget;
    s.unique_vertices = seen.size();
    return s;
}

namespace {

// Lazily drawn uniform permutation of 1..deg: sparse Fisher-Yates, one
// position per first use, then replayed cyclically.
struct LazyRotor {
    Degree deg = 0;
    std::uint64_t visits = 0;
    std::vector<Slot> drawn;
    std::unordered_map<std::uint64_t, std::uint64_t> swapped;

    Slot next(Rng& rng) {
        Slot s;
        if (visits < deg) {
            const std::uint64_t k = visits;
            const std::uint64_t j = k + rng.uniform_below(deg - k);
            auto at = [&](std::uint64_t i) {
                auto it = swapped.find(i);
                return it == swapped.end() ? i : it->second;
            };
            const std::uint64_t vj = at(j), vk = at(k);
            swapped[j] = vk;
            swapped.erase(k);
            s = vj + 1;
            drawn.push_back(s);
        } else {
            s = drawn[visits % deg];
        }
        ++visits;
        return s;
    }
};

}  // namespace

RotorOutcome run_rotor_walk(const GraphFamily& g, const RotorConfig& config, const VertexRef& start,
                            std::uint64_t budget, bool record_path) {
    if (budget == 0) throw Error(ErrorCode::budget_zero, "walk budget must be >= 1");
    validate_vertex(g, start);
    RotorOutcome out;

    if (!g.is_finite()) {
        if (config.kind == RotorConfig::Kind::explicit_orders)
            throw Error(ErrorCode::infinite_family, "explicit rotor orders need a finite graph");
        Rng rng(config.seed);
        std::unordered_map<VertexRef, LazyRotor, VertexRefHash> rotors;
        std::unordered_set<VertexRef, VertexRefHash> seen{start};
        VertexRef v = start;
        if (record_path) out.path.push_back(v);
        for (std::uint64_t t = 0; t < budget; ++t) {
            auto& r = rotors[v];
            Slot s;
            if (config.kind == RotorConfig::Kind::canonical) {
                r.deg = degree(g, v);
                s = r.visits++ % r.deg + 1;
            } else {
                if (r.deg == 0) r.deg = degree(g, v);
                s = r.next(rng);
            }
            v = neighbor(g, v, s);
            seen.insert(v);
            if (record_path) out.path.push_back(v);
        }
        out.steps = budget;
        out.unique_vertices = seen.size();
        return out;
    }

    const auto n = g.vertex_count();
    std::vector<std::vector<Slot>> orders(n);
    if (config.kind == RotorConfig::Kind::explicit_orders) {
        if (config.orders.size() != n) throw Error(ErrorCode::invalid_argument, "rotor orders size mismatch");
        for (std::uint64_t u = 0; u < n; ++u) {
            auto sorted = config.orders[u];
            std::sort(sorted.begin(), sorted.end());
            const Degree d = degree(g, VertexRef::index(u));
            bool ok = sorted.size() == d;
            for (std::size_t k = 0; ok && k < sorted.size(); ++k) ok = sorted[k] == k + 1;
            if (!ok) throw Error(ErrorCode::invalid_argument, "rotor order at " + std::to_string(u) + " not a permutation");
        }
        orders = config.orders;
    } else {
        Rng rng(config.seed);
        for (std::uint64_t u = 0; u < n; ++u) {
            auto& o = orders[u];
            o.resize(degree(g, VertexRef::index(u)));
            std::iota(o.begin(), o.end(), Slot{1});
            if (config.kind == RotorConfig::Kind::uniform)
                for (std::size_t i = o.size(); i > 1; --i) std::swap(o[i - 1], o[rng.uniform_below(i)]);
        }
    }

    // state = (position, rotor index per vertex); Brent's cycle finding on the live trajectory
    std::vector<std::uint64_t> rotor(n, 0);
    std::vector<bool> seen(n, false);
    std::uint64_t pos = static_cast<std::uint64_t>(start[0]);
    seen[pos] = true;
    std::uint64_t unique = 1;
    const bool detect = n <= config.period_detection_cap;
    std::uint64_t saved_pos = pos;
    std::vector<std::uint64_t> saved_rotor = detect ? rotor : std::vector<std::uint64_t>{};
    std::uint64_t power = 1, lam = 0;
    if (record_path) out.path.push_back(VertexRef::index(pos));

    std::uint64_t t = 0;
    while (t < budget) {
        const auto& o = orders[pos];
        const Slot s = o[rotor[pos]];
        rotor[pos] = (rotor[pos] + 1) % o.size();
        pos = static_cast<std::uint64_t>(neighbor(g, VertexRef::index(pos), s)[0]);
        if (!seen[pos]) {
            seen[pos] = true;
            ++unique;
        }
        if (record_path) out.path.push_back(VertexRef::index(pos));
        ++t;
        if (detect) {
            ++lam;
            if (pos == saved_pos && rotor == saved_rotor) {
                out.period = lam;
                out.budget_exhausted = false;
                break;
            }
            if (lam == power) {
                saved_pos = pos;
                saved_rotor = rotor;
                power *= 2;
                lam = 0;
            }
        }
    }
    out.steps = t;
    out.unique_vertices = unique;
    return out;
}

CycleCensus cycle_census(PortLabeling& labeling) {
    const auto& g = labeling.graph();
    if (!g.is_finite()) throw Error(ErrorCode::infinite_family, "cycle census of " + g.name());
    const bool deterministic = std::holds_alternative<Deterministic>(labeling.mode());
    const auto n = g.vertex_count();
    std::vector<std::uint64_t> offset(n + 1, 0);
    for (std::uint64_t u = 0; u < n; ++u) {
        const auto v = VertexRef::index(u);
        const Degree d = degree(g, v);
        if (!deterministic && labeling.bound_count(v) != d)
            throw Error(ErrorCode::invalid_argument, "cycle census needs a total labeling");
        offset[u + 1] = offset[u] + d;
    }
    const std::uint64_t total = offset[n];
    std::vector<std::uint64_t> vertex_of(total);
    for (std::uint64_t u = 0; u < n; ++u)
        for (auto k = offset[u]; k < offset[u + 1]; ++k) vertex_of[k] = u;

    Rng unused(0);
    std::vector<std::uint64_t> next(total);
    for (std::uint64_t k = 0; k < total; ++k) {
        const auto u = vertex_of[k];
        const WalkState s{VertexRef::index(u), k - offset[u] + 1};
        const WalkState w = step(g, labeling, s, unused);
        next[k] = offset[static_cast<std::uint64_t>(w.position[0])] + w.next_port - 1;
    }

    CycleCensus c;
    c.states = total;
    // 0 = unvisited, 1 = on current path, 2 = done
    std::vector<std::uint8_t> color(total, 0);
    std::vector<std::uint64_t> path;
    std::vector<std::uint64_t> mark(n, 0);
    std::uint64_t stamp = 0;
    for (std::uint64_t k0 = 0; k0 < total; ++k0) {
        if (color[k0]) continue;
        path.clear();
        std::uint64_t k = k0;
        while (color[k] == 0) {
            color[k] = 1;
            path.push_back(k);
            k = next[k];
        }
        if (color[k] == 1) {
            ++c.cycles;
            ++stamp;
            std::uint64_t len = 0, verts = 0;
            std::uint64_t j = k;
            do {
                ++len;
                if (mark[vertex_of[j]] != stamp) {
                    mark[vertex_of[j]] = stamp;
                    ++verts;
                }
                j = next[j];
            } while (j != k);
            c.longest_cycle_states = std::max(c.longest_cycle_states, len);
            c.longest_cycle_vertices = std::max(c.longest_cycle_vertices, verts);
        }
        for (auto p : path) color[p] = 2;
    }
    return c;
}

}  // namespace basicwalk
