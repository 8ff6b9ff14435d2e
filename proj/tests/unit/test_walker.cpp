#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "basicwalk/error.hpp"
#include "basicwalk/io.hpp"
#include "basicwalk/walker.hpp"
#include "bridge.hpp"

using namespace basicwalk;

TEST_CASE("single steps") {
    const auto star = GraphFamily::star(8);
    PortLabeling lab(star);
    lab.bind(VertexRef::index(0), 1, 6);
    Rng rng(0);
    const auto s = step(star, lab, WalkState{VertexRef::index(0), 1}, rng);
    CHECK(s.position == VertexRef::index(6));
    CHECK(s.next_port == 1);

    const auto k10 = GraphFamily::complete(10);
    PortLabeling lk(k10);
    const auto t = step(k10, lk, WalkState{VertexRef::index(3), 9}, rng);
    CHECK(t.next_port == 1);

    const auto z2 = GraphFamily::lattice(2);
    PortLabeling lz(z2, Deterministic{StaircaseZ2{}});
    const auto before = rng.draws();
    step(z2, lz, WalkState{VertexRef{2, 5}, 4}, rng);
    CHECK(rng.draws() == before);
}

TEST_CASE("argument validation") {
    const auto z2 = GraphFamily::lattice(2);
    try {
        run_basic_walk(z2, LazyUniform{}, origin(z2), 1, 0, 1);
        FAIL("expected budget error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::budget_zero);
    }
    try {
        run_basic_walk(z2, LazyUniform{}, origin(z2), 5, 10, 1);
        FAIL("expected port error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::invalid_init_port);
    }
    CHECK_THROWS_AS(run_simple_random_walk(z2, origin(z2), 0, 1), Error);
    CHECK_THROWS_AS(run_rotor_walk(z2, RotorConfig{}, origin(z2), 0), Error);
}

TEST_CASE("star graph traps between the hub and one leaf") {
    const auto star = GraphFamily::star(8);
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        const auto o = run_basic_walk(star, LazyUniform{}, origin(star), 1, 100, seed);
        REQUIRE(o.cycled());
        CHECK(o.period() == 2);
        CHECK(o.tail() <= 2);
        CHECK(o.unique_vertices == 3);
    }
}

TEST_CASE("alternating labeling on Z escapes monotonically") {
    const auto z1 = GraphFamily::lattice(1);
    for (Port p = 1; p <= 2; ++p) {
        const auto o = run_basic_walk(z1, Deterministic{AlternatingZ1{}}, origin(z1), p, 5000, 0);
        CHECK_FALSE(o.cycled());
        CHECK(o.max_distance == 5000);
        CHECK(o.monotone_escape);
        CHECK(o.monotone_prefix == 5000);
        CHECK(o.unique_vertices == 5001);
    }
    // any start: displacement grows by one per step
    const auto o = run_basic_walk(z1, Deterministic{AlternatingZ1{}}, VertexRef{-37}, 2, 1000, 0);
    CHECK(std::abs(o.final_state.position[0] + 37) == 1000);
}

TEST_CASE("a seed realizing trap T gives period 4") {
    const auto z2 = GraphFamily::lattice(2);
    bool found = false;
    for (std::uint64_t seed = 0; seed < 200000 && !found; ++seed) {
        const auto o = run_basic_walk(z2, LazyUniform{}, origin(z2), 1, 64, seed);
        if (!(o.cycled() && o.tail() == 0 && o.unique_vertices == 3)) continue;
        found = true;
        CHECK(o.period() == 4);
        std::vector<TraceRow> trace;
        WalkOptions opts;
        opts.record_trace = true;
        run_basic_walk(z2, LazyUniform{}, origin(z2), 1, 64, seed, opts, &trace);
        REQUIRE(trace.size() == 4);
        CHECK(trace[0].vertex == origin(z2));
        CHECK(trace[2].vertex == origin(z2));
        CHECK(trace[1].vertex != trace[3].vertex);
    }
    CHECK(found);
}

TEST_CASE("outcome invariants and cycle soundness") {
    const auto z2 = GraphFamily::lattice(2);
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        PortLabeling lab(z2);
        Rng rng(seed);
        const auto o = run_basic_walk(z2, lab, origin(z2), 1, 100000, rng);
        REQUIRE(o.cycled());
        CHECK(o.period() >= 2);
        CHECK(o.tail() + o.period() == o.steps_taken);
        CHECK(o.unique_states <= o.steps_taken);
        CHECK(o.unique_vertices <= o.unique_states + 1);
        CHECK(o.fresh_labels == lab.bindings().size());
        CHECK(lab.random_resolutions() <= o.fresh_labels);
        CHECK(o.fresh_labels <= o.steps_taken);

        // extend: the cycle repeats verbatim and binds nothing new
        WalkState s = o.final_state;
        std::vector<WalkState> first, second;
        for (std::uint64_t k = 0; k < 2 * o.period(); ++k) {
            (k < o.period() ? first : second).push_back(s);
            s = step(z2, lab, s, rng);
        }
        CHECK(first == second);
        CHECK(lab.bindings().size() == o.fresh_labels);
    }
}

TEST_CASE("replaying recorded labels reproduces the trajectory") {
    const auto k7 = GraphFamily::complete(7);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        PortLabeling lab(k7);
        Rng rng(seed);
        std::vector<TraceRow> a, b;
        WalkOptions opts;
        opts.record_trace = true;
        const auto o = run_basic_walk(k7, lab, origin(k7), 1, 1000, rng, opts, &a);
        REQUIRE(o.cycled());
        const auto replay = run_basic_walk(k7, Deterministic{complete_fixture(lab)}, origin(k7), 1, 1000, 0, opts, &b);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].vertex == b[i].vertex);
            CHECK(a[i].slot == b[i].slot);
        }
        CHECK(replay.tail() == o.tail());
        CHECK(replay.period() == o.period());
    }
}

TEST_CASE("pigeonhole: finite graphs always cycle within 2x the arc count") {
    std::vector<GraphFamily> families{GraphFamily::complete(2), GraphFamily::complete(5), GraphFamily::complete(12),
                                      GraphFamily::grid(1, 2),   GraphFamily::grid(3, 7),   GraphFamily::grid(10, 10),
                                      GraphFamily::star(1),      GraphFamily::star(13)};
    for (const auto& g : families)
        for (std::uint64_t seed = 0; seed < 200; ++seed)
            for (const LabelingMode& m : {LabelingMode{LazyUniform{}}, LabelingMode{FullUniform{}}})
                REQUIRE(run_basic_walk(g, m, origin(g), 1, 2 * g.arc_count(), seed).cycled());
}

TEST_CASE("lazy and full labelings agree exactly on every graph with at most 4 vertices") {
    int graphs = 0;
    for (int n = 2; n <= 4; ++n)
        for (const auto& adj : oracle::connected_graphs(n)) {
            ++graphs;
            const auto g = oracle::to_family(adj);
            const std::uint64_t budget = 2 * g.arc_count() + 1;
            for (int start = 0; start < n; ++start)
                for (int port = 1; port <= static_cast<int>(adj[start].size()); ++port) {
                    const auto lazy = oracle::lazy_distribution(adj, start, port, budget);
                    const auto full = oracle::full_distribution(adj, start, port, budget);
                    REQUIRE(lazy == full);
                    // the library, walked over every full labeling, gives the same law
                    oracle::Dist lib;
                    std::uint64_t count = 0;
                    oracle::for_each_full_table(adj, [&](const oracle::Table& t) {
                        const auto o = run_basic_walk(g, Deterministic{oracle::to_fixture(t)},
                                                      VertexRef::index(start), port, budget, 0);
                        lib[oracle::from_library(o)] += 1;
                        ++count;
                    });
                    for (auto& [o, p] : lib) p /= static_cast<long>(count);
                    REQUIRE(lib == lazy);
                }
        }
    CHECK(graphs == 1 + 4 + 38);
}

TEST_CASE("library lazy sampling matches the exact law on K_4") {
    const auto adj = oracle::complete_adj(4);
    const auto exact = oracle::lazy_distribution(adj, 0, 1, 25);
    const double mu = oracle::expectation(exact, [](const oracle::Outcome& o) { return double(o.steps); }).get_d();
    const double m2 =
        oracle::expectation(exact, [](const oracle::Outcome& o) { return double(o.steps) * o.steps; }).get_d();
    const auto k4 = GraphFamily::complete(4);
    const int n = 100000;
    double sum = 0;
    for (int i = 0; i < n; ++i) sum += run_basic_walk(k4, LazyUniform{}, origin(k4), 1, 25, mix64(i)).steps_taken;
    CHECK(oracle::within_sigma(sum / n, mu, std::sqrt((m2 - mu * mu) / n)));
}

TEST_CASE("half-coverage fixture on K_10") {
    const auto k10 = GraphFamily::complete(10);
    const auto fx = parse_fixture(k10, read_file(std::string(BASICWALK_TEST_DATA) + "/k10_half_coverage.txt"));
    const auto a = run_basic_walk(k10, Deterministic{fx}, origin(k10), 1, 1000, 1);
    const auto b = run_basic_walk(k10, Deterministic{fx}, origin(k10), 1, 1000, 2);
    CHECK(a.cycled());
    CHECK(a.unique_vertices == 5);
    CHECK(a.steps_taken == b.steps_taken);
    CHECK(a.period() == b.period());
}

TEST_CASE("trace csv") {
    const auto z2 = GraphFamily::lattice(2);
    std::vector<TraceRow> trace;
    WalkOptions opts;
    opts.record_trace = true;
    const auto o = run_basic_walk(z2, LazyUniform{}, origin(z2), 1, 50, 7, opts, &trace);
    CHECK(trace.size() == o.steps_taken);
    std::ostringstream ss;
    write_trace_csv(ss, z2, trace);
    std::istringstream in(ss.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "step,vertex,port,slot,distance,new_label");
    std::getline(in, line);
    CHECK(line.rfind("0,0;0,1,", 0) == 0);
    // no trace unless asked
    std::vector<TraceRow> none;
    run_basic_walk(z2, LazyUniform{}, origin(z2), 1, 50, 7, WalkOptions{}, &none);
    CHECK(none.empty());
}

TEST_CASE("simple random walk baseline") {
    const auto star = GraphFamily::star(8);
    // after 2m steps from the hub: 1 + expected distinct leaves among m draws
    const int m = 6, n = 40000;
    const double expect = 1 + 8 * (1 - std::pow(7.0 / 8, m));
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
        const double u = run_simple_random_walk(star, origin(star), 2 * m, i).unique_vertices;
        sum += u;
        sq += u * u;
    }
    const double mean = sum / n, var = sq / n - mean * mean;
    CHECK(oracle::within_sigma(mean, expect, std::sqrt(var / n)));

    // K_n over n-1 steps is the occupancy process
    const int kn = 12;
    const auto g = GraphFamily::complete(kn);
    const double occ = 1 + (kn - 1) * (1 - std::pow(double(kn - 2) / (kn - 1), kn - 1));
    sum = sq = 0;
    for (int i = 0; i < n; ++i) {
        const double u = run_simple_random_walk(g, origin(g), kn - 1, 1000000 + i).unique_vertices;
        sum += u;
        sq += u * u;
    }
    CHECK(oracle::within_sigma(sum / n, occ, std::sqrt((sq / n - (sum / n) * (sum / n)) / n)));
}

TEST_CASE("rotor walk") {
    const auto star = GraphFamily::star(3);
    // every ordering of the hub (both cyclic classes) sweeps all leaves
    std::vector<Slot> perm{1, 2, 3};
    do {
        RotorConfig c;
        c.kind = RotorConfig::Kind::explicit_orders;
        c.orders = {perm, {1}, {1}, {1}};
        const auto r = run_rotor_walk(star, c, origin(star), 100);
        CHECK(r.unique_vertices == 4);
        REQUIRE(r.period);
        CHECK(*r.period == 6);
    } while (std::next_permutation(perm.begin(), perm.end()));

    const auto k4 = GraphFamily::complete(4);
    RotorConfig canon;
    const auto r = run_rotor_walk(k4, canon, origin(k4), 10000);
    REQUIRE(r.period);
    CHECK_FALSE(r.budget_exhausted);
    CHECK(r.unique_vertices == 4);

    // k-th visit exits along order[(k-1) mod deg]
    RotorConfig c;
    c.kind = RotorConfig::Kind::explicit_orders;
    c.orders = {{2, 1, 3}, {1}, {1}, {1}};
    const auto p = run_rotor_walk(star, c, origin(star), 6, true);
    std::vector<VertexRef> expect{VertexRef::index(0), VertexRef::index(2), VertexRef::index(0), VertexRef::index(1),
                                  VertexRef::index(0), VertexRef::index(3), VertexRef::index(0)};
    CHECK(p.path == expect);

    RotorConfig u;
    u.kind = RotorConfig::Kind::uniform;
    u.seed = 11;
    const auto z2 = GraphFamily::lattice(2);
    const auto a = run_rotor_walk(z2, u, origin(z2), 2000, true);
    const auto b = run_rotor_walk(z2, u, origin(z2), 2000, true);
    CHECK(a.path == b.path);
    CHECK(a.budget_exhausted);
    CHECK_FALSE(a.period);
    const auto ka = run_rotor_walk(GraphFamily::complete(9), u, origin(k4), 5000, true);
    const auto kb = run_rotor_walk(GraphFamily::complete(9), u, origin(k4), 5000, true);
    CHECK(ka.path == kb.path);
}

TEST_CASE("cycle census agrees with direct state enumeration") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto g = GraphFamily::grid(3, 4);
        Rng rng(seed);
        auto lab = full_uniform_labeling(g, rng);
        const auto census = cycle_census(lab);

        // brute force: follow every state until a repeat; collect cycles by their state sets
        std::set<std::set<std::pair<std::int64_t, Port>>> cycles;
        std::uint64_t states = 0, longest_vertices = 0;
        for (std::uint64_t u = 0; u < g.vertex_count(); ++u)
            for (Port p = 1; p <= degree(g, VertexRef::index(u)); ++p) {
                ++states;
                std::vector<WalkState> path{WalkState{VertexRef::index(u), p}};
                Rng unused(0);
                while (true) {
                    auto nx = step(g, lab, path.back(), unused);
                    auto it = std::find(path.begin(), path.end(), nx);
                    if (it != path.end()) {
                        std::set<std::pair<std::int64_t, Port>> cyc;
                        std::set<std::int64_t> verts;
                        for (; it != path.end(); ++it) {
                            cyc.emplace(it->position[0], it->next_port);
                            verts.insert(it->position[0]);
                        }
                        cycles.insert(cyc);
                        longest_vertices = std::max<std::uint64_t>(longest_vertices, verts.size());
                        break;
                    }
                    path.push_back(nx);
                }
            }
        CHECK(census.states == states);
        CHECK(census.cycles == cycles.size());
        CHECK(census.longest_cycle_vertices == longest_vertices);
        std::uint64_t longest = 0;
        for (const auto& c : cycles) longest = std::max<std::uint64_t>(longest, c.size());
        CHECK(census.longest_cycle_states == longest);
    }
}
