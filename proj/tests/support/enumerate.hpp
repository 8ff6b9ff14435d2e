#pragma once

// Exhaustive oracles for tiny graphs. Deliberately shares no code with the
// library: plain adjacency lists, its own automaton loop, GMP rationals.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <tuple>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using Adj = std::vector<std::vector<int>>;

struct Outcome {
    bool cycled = false;
    std::uint64_t tail = 0;
    std::uint64_t period = 0;
    std::uint64_t steps = 0;
    std::uint64_t unique_vertices = 0;
    auto key() const { return std::tie(cycled, tail, period, steps, unique_vertices); }
    friend bool operator<(const Outcome& a, const Outcome& b) { return a.key() < b.key(); }
    friend bool operator==(const Outcome& a, const Outcome& b) { return a.key() == b.key(); }
};

using Dist = std::map<Outcome, mpq_class>;

inline mpq_class expectation(const Dist& d, const std::function<double(const Outcome&)>& f) {
    mpq_class e = 0;
    for (const auto& [o, p] : d) e += p * mpq_class(f(o));
    return e;
}

// port -> slot index (0-based) per vertex; -1 = unbound
using Table = std::vector<std::vector<int>>;

// Walks a total or partial table. `choose(v, port, free_slots)` is called for
// unbound ports and must return the chosen slot.
inline Outcome walk_table(const Adj& adj, Table& table, int start, int port, std::uint64_t budget,
                          const std::function<int(int, int, const std::vector<int>&)>& choose) {
    std::map<std::pair<int, int>, std::uint64_t> seen;
    std::vector<bool> visited(adj.size(), false);
    int v = start, p = port;  // p is 1-based
    seen[{v, p}] = 0;
    visited[v] = true;
    Outcome o;
    std::uint64_t t = 0;
    while (t < budget) {
        int& slot = table[v][p - 1];
        if (slot < 0) {
            std::vector<int> free;
            for (int s = 0; s < static_cast<int>(adj[v].size()); ++s)
                if (std::find(table[v].begin(), table[v].end(), s) == table[v].end()) free.push_back(s);
            slot = choose(v, p, free);
        }
        const int w = adj[v][slot];
        const int q = p % static_cast<int>(adj[w].size()) + 1;
        v = w;
        p = q;
        visited[v] = true;
        ++t;
        auto it = seen.find({v, p});
        if (it != seen.end()) {
            o.cycled = true;
            o.tail = it->second;
            o.period = t - it->second;
            break;
        }
        seen[{v, p}] = t;
    }
    o.steps = t;
    o.unique_vertices = static_cast<std::uint64_t>(std::count(visited.begin(), visited.end(), true));
    return o;
}

// Lazy decision tree: at every first use of a port, branch over all free
// slots with equal probability.
inline Dist lazy_distribution(const Adj& adj, int start, int port, std::uint64_t budget) {
    struct Node {
        Table table;
        std::map<std::pair<int, int>, std::uint64_t> seen;
        std::vector<bool> visited;
        int v = 0, p = 1;
        std::uint64_t t = 0;
        mpq_class prob = 1;
    };
    Dist dist;
    auto finish = [&](const Node& n, bool cycled, std::uint64_t first) {
        Outcome o;
        o.cycled = cycled;
        if (cycled) {
            o.tail = first;
            o.period = n.t - first;
        }
        o.steps = n.t;
        o.unique_vertices = static_cast<std::uint64_t>(std::count(n.visited.begin(), n.visited.end(), true));
        dist[o] += n.prob;
    };
    std::function<void(Node)> rec = [&](Node n) {
        while (n.t < budget) {
            int slot = n.table[n.v][n.p - 1];
            if (slot < 0) {
                std::vector<int> free;
                for (int s = 0; s < static_cast<int>(adj[n.v].size()); ++s)
                    if (std::find(n.table[n.v].begin(), n.table[n.v].end(), s) == n.table[n.v].end()) free.push_back(s);
                for (int s : free) {
                    Node c = n;
                    c.table[n.v][n.p - 1] = s;
                    c.prob /= static_cast<long>(free.size());
                    rec(std::move(c));
                }
                return;
            }
            const int w = adj[n.v][slot];
            n.p = n.p % static_cast<int>(adj[w].size()) + 1;
            n.v = w;
            n.visited[w] = true;
            ++n.t;
            auto it = n.seen.find({n.v, n.p});
            if (it != n.seen.end()) return finish(n, true, it->second);
            n.seen[{n.v, n.p}] = n.t;
        }
        finish(n, false, 0);
    };
    Node root;
    root.table.resize(adj.size());
    for (std::size_t v = 0; v < adj.size(); ++v) root.table[v].assign(adj[v].size(), -1);
    root.visited.assign(adj.size(), false);
    root.visited[start] = true;
    root.v = start;
    root.p = port;
    root.seen[{start, port}] = 0;
    rec(std::move(root));
    return dist;
}

// Every total labeling (independent permutation per vertex), each equally likely.
inline void for_each_full_table(const Adj& adj, const std::function<void(const Table&)>& f) {
    Table t(adj.size());
    for (std::size_t v = 0; v < adj.size(); ++v) {
        t[v].resize(adj[v].size());
        std::iota(t[v].begin(), t[v].end(), 0);
    }
    while (true) {
        f(t);
        std::size_t v = 0;
        for (; v < t.size(); ++v) {
            if (std::next_permutation(t[v].begin(), t[v].end())) break;  // else wrapped to sorted: carry
        }
        if (v == t.size()) return;
    }
}

inline Dist full_distribution(const Adj& adj, int start, int port, std::uint64_t budget) {
    Dist dist;
    std::uint64_t count = 0;
    for_each_full_table(adj, [&](const Table& t) {
        Table work = t;
        dist[walk_table(adj, work, start, port, budget, [](int, int, const std::vector<int>&) -> int { throw 1; })] += 1;
        ++count;
    });
    for (auto& [o, p] : dist) p /= static_cast<long>(count);
    return dist;
}

// All connected simple graphs on n labelled vertices (edge subsets of K_n).
inline std::vector<Adj> connected_graphs(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) edges.emplace_back(a, b);
    std::vector<Adj> out;
    for (std::uint32_t mask = 0; mask < (1u << edges.size()); ++mask) {
        Adj adj(n);
        for (std::size_t e = 0; e < edges.size(); ++e)
            if (mask >> e & 1) {
                adj[edges[e].first].push_back(edges[e].second);
                adj[edges[e].second].push_back(edges[e].first);
            }
        std::vector<bool> seen(n, false);
        std::vector<int> stack{0};
        seen[0] = true;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int w : adj[u])
                if (!seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
        }
        if (std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) out.push_back(adj);
    }
    return out;
}

inline Adj complete_adj(int n) {
    Adj adj(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b) adj[a].push_back(b);
    return adj;
}

// Z process by direct enumeration of every draw sequence; pigeonhole over the
// n*n (position, value) pairs bounds K by n*n + 1.
inline mpq_class z_process_enumerated(int n) {
    mpq_class e = 0;
    std::function<void(std::vector<int>&, mpq_class)> rec = [&](std::vector<int>& seq, mpq_class p) {
        const std::size_t k = seq.size();  // next draw has index k+1, position k mod n
        for (int z = 0; z < n; ++z) {
            bool repeat = false;
            for (std::size_t j = k % n; j < k; j += n) repeat = repeat || seq[j] == z;
            const mpq_class q = p / n;
            if (repeat) {
                e += q * static_cast<long>(k + 1);
            } else {
                seq.push_back(z);
                rec(seq, q);
                seq.pop_back();
            }
        }
    };
    std::vector<int> seq;
    rec(seq, 1);
    return e;
}

// X process by enumeration: x_1 = 1, x_{k+1} uniform over [n] \ {x_k}, n values.
inline mpq_class occupancy_enumerated(int n) {
    mpq_class e = 0;
    std::function<void(std::vector<int>&, mpq_class)> rec = [&](std::vector<int>& seq, mpq_class p) {
        if (static_cast<int>(seq.size()) == n) {
            std::vector<int> s = seq;
            std::sort(s.begin(), s.end());
            e += p * static_cast<long>(std::unique(s.begin(), s.end()) - s.begin());
            return;
        }
        for (int x = 1; x <= n; ++x) {
            if (x == seq.back()) continue;
            seq.push_back(x);
            rec(seq, p / (n - 1));
            seq.pop_back();
        }
    };
    std::vector<int> seq{1};
    rec(seq, 1);
    return e;
}

}  // namespace oracle
