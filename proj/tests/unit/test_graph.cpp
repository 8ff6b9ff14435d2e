#include <doctest.h>

#include <deque>
#include <map>
#include <set>

#include "basicwalk/error.hpp"
#include "basicwalk/graph.hpp"

using namespace basicwalk;

namespace {

std::vector<VertexRef> neighbours(const GraphFamily& g, const VertexRef& v) {
    std::vector<VertexRef> out;
    for (Slot s = 1; s <= degree(g, v); ++s) out.push_back(neighbor(g, v, s));
    return out;
}

void check_local_structure(const GraphFamily& g, const VertexRef& v) {
    auto nb = neighbours(g, v);
    std::set<VertexRef> uniq(nb.begin(), nb.end());
    CHECK(uniq.size() == nb.size());
    CHECK(uniq.count(v) == 0);
    for (Slot s = 1; s <= nb.size(); ++s) {
        const auto& w = nb[s - 1];
        CHECK(slot_toward(g, v, w) == s);
        // symmetry
        CHECK(slot_toward(g, w, v) != 0);
        const auto dv = distance(g, v), dw = distance(g, w);
        CHECK((dv > dw ? dv - dw : dw - dv) <= 1);
    }
}

// BFS distances over the patch |x|,|y| <= r, expanding beyond it by a margin
std::map<VertexRef, std::uint64_t> bfs_patch(const GraphFamily& g, std::int64_t reach) {
    std::map<VertexRef, std::uint64_t> d;
    std::deque<VertexRef> q{origin(g)};
    d[origin(g)] = 0;
    while (!q.empty()) {
        auto u = q.front();
        q.pop_front();
        for (const auto& w : neighbours(g, u)) {
            if (std::abs(w[0]) > reach || std::abs(w[1]) > reach || d.count(w)) continue;
            d[w] = d[u] + 1;
            q.push_back(w);
        }
    }
    return d;
}

}  // namespace

TEST_CASE("lattice degrees, slot order and distance") {
    const auto z2 = GraphFamily::lattice(2);
    CHECK(degree(z2, VertexRef{17, -3}) == 4);
    CHECK(neighbor(z2, origin(z2), 1) == VertexRef{1, 0});
    CHECK(neighbor(z2, origin(z2), 2) == VertexRef{-1, 0});
    CHECK(neighbor(z2, origin(z2), 3) == VertexRef{0, 1});
    CHECK(neighbor(z2, origin(z2), 4) == VertexRef{0, -1});
    CHECK(distance(z2, VertexRef{3, -2}) == 3);
    CHECK(origin(GraphFamily::lattice(3)) == VertexRef{0, 0, 0});
    CHECK(degree(GraphFamily::lattice(5), VertexRef{0, 0, 0, 0, 0}) == 10);
    for (std::int64_t x = -3; x <= 3; ++x)
        for (std::int64_t y = -3; y <= 3; ++y) check_local_structure(z2, VertexRef{x, y});
    CHECK(z2.name() == "z2");
}

TEST_CASE("invalid vertices and slots are rejected") {
    const auto z2 = GraphFamily::lattice(2);
    CHECK_THROWS_AS(degree(z2, VertexRef{1, 2, 3}), Error);
    try {
        neighbor(z2, origin(z2), 5);
        FAIL("expected slot error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::slot_out_of_range);
    }
    CHECK_THROWS_AS(neighbor(z2, origin(z2), 0), Error);
    CHECK_THROWS_AS(degree(GraphFamily::complete(5), VertexRef::index(5)), Error);
    CHECK_THROWS_AS(GraphFamily::lattice(0), Error);
    CHECK_THROWS_AS(GraphFamily::complete(1), Error);
    CHECK_THROWS_AS(degree(GraphFamily::growing_tree(), VertexRef{1}), Error);  // level 1 has one child
}

TEST_CASE("hex lattice is 3-regular, symmetric and triangle-free on a patch") {
    const auto hex = GraphFamily::hex();
    CHECK(neighbor(hex, VertexRef{0, 0}, 3) == VertexRef{0, 1});
    CHECK(neighbor(hex, VertexRef{1, 0}, 3) == VertexRef{1, -1});
    CHECK(neighbor(hex, VertexRef{4, 6}, 1) == VertexRef{5, 6});
    CHECK(distance(hex, VertexRef{2, 0}) == 2);
    for (std::int64_t x = -10; x <= 10; ++x)
        for (std::int64_t y = -10; y <= 10; ++y) {
            const VertexRef v{x, y};
            CHECK(degree(hex, v) == 3);
            check_local_structure(hex, v);
            auto nb = neighbours(hex, v);
            for (std::size_t a = 0; a < nb.size(); ++a)
                for (std::size_t b = a + 1; b < nb.size(); ++b) CHECK(slot_toward(hex, nb[a], nb[b]) == 0);
        }
}

TEST_CASE("hex closed-form distance matches BFS") {
    const auto hex = GraphFamily::hex();
    // margin: BFS restricted to a box is exact well inside it
    const auto d = bfs_patch(hex, 60);
    for (std::int64_t x = -20; x <= 20; ++x)
        for (std::int64_t y = -20; y <= 20; ++y) {
            const VertexRef v{x, y};
            REQUIRE(d.count(v));
            CHECK(distance(hex, v) == d.at(v));
        }
}

TEST_CASE("growing tree") {
    const auto t = GraphFamily::growing_tree();
    const auto root = origin(t);
    CHECK(root.size() == 0);
    CHECK(degree(t, root) == 1);
    const auto l1 = neighbor(t, root, 1);
    CHECK(l1 == VertexRef{0});
    CHECK(degree(t, l1) == 3);
    CHECK(neighbor(t, l1, 1) == root);
    const VertexRef l4{0, 1, 3, 7};
    CHECK(distance(t, l4) == 4);
    CHECK(degree(t, l4) == (1u << 4) + 1);
    check_local_structure(t, l4);
    CHECK(neighbor(t, l4, 1) == VertexRef{0, 1, 3});
    CHECK(neighbor(t, l4, 17) == VertexRef{0, 1, 3, 7, 15});
    // deep vertex: degree 2^40 + 1 without enumeration
    VertexRef deep;
    for (int k = 0; k < 40; ++k) deep.mutable_coords().push_back(0);
    CHECK(degree(t, deep) == (std::uint64_t{1} << 40) + 1);
    CHECK(neighbor(t, deep, degree(t, deep))[40] == (std::int64_t{1} << 40) - 1);
    CHECK(format_vertex(t, VertexRef{0, 1}) == "r/0/1");
    CHECK(parse_vertex(t, "r/0/1") == VertexRef{0, 1});
    CHECK(parse_vertex(t, "r") == root);
}

TEST_CASE("finite families") {
    const auto k10 = GraphFamily::complete(10);
    CHECK(degree(k10, VertexRef::index(3)) == 9);
    CHECK(k10.vertex_count() == 10);
    CHECK(k10.arc_count() == 90);
    CHECK(origin(GraphFamily::complete(5)) == VertexRef::index(0));
    for (std::uint64_t v = 0; v < 10; ++v) check_local_structure(k10, VertexRef::index(v));

    const auto star = GraphFamily::star(8);
    CHECK(degree(star, VertexRef::index(0)) == 8);
    CHECK(degree(star, VertexRef::index(5)) == 1);
    CHECK(neighbor(star, VertexRef::index(0), 3) == VertexRef::index(3));

    const auto grid = GraphFamily::grid(3, 4);
    std::multiset<Degree> degs;
    for (std::uint64_t v = 0; v < 12; ++v) {
        degs.insert(degree(grid, VertexRef::index(v)));
        check_local_structure(grid, VertexRef::index(v));
    }
    CHECK(degs.count(2) == 4);
    CHECK(degs.count(3) == 6);
    CHECK(degs.count(4) == 2);
    CHECK(distance(grid, VertexRef::index(11)) == 5);
    CHECK(grid.name() == "grid:3x4");
    CHECK(neighbours(GraphFamily::grid(1, 2), VertexRef::index(0)).size() == 1);
}

TEST_CASE("adjacency file loading") {
    const auto tri = load_explicit("n 3\n0: 1 2\n1: 0 2\n2: 0 1\n");
    for (std::uint64_t v = 0; v < 3; ++v) CHECK(degree(tri, VertexRef::index(v)) == 2);

    const auto g23 = load_explicit("n 6\n# 2x3\n0: 1 3\n1: 0 2 4\n2: 1 5\n3: 0 4\n4: 1 3 5\n5: 2 4\n");
    std::vector<Degree> degs;
    for (std::uint64_t v = 0; v < 6; ++v) degs.push_back(degree(g23, VertexRef::index(v)));
    CHECK(degs == std::vector<Degree>{2, 3, 2, 2, 3, 2});
    CHECK(distance(g23, VertexRef::index(5)) == 3);
    CHECK(load_explicit(format_explicit(g23)).adjacency() == g23.adjacency());

    auto code_of = [](const char* text) {
        try {
            load_explicit(text);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::io_error;  // sentinel: nothing thrown
    };
    CHECK(code_of("n 2\n0: 1\n1:\n") == ErrorCode::asymmetric_adjacency);
    CHECK(code_of("n 4\n0: 1\n1: 0\n2: 3\n3: 2\n") == ErrorCode::disconnected_graph);
    CHECK(code_of("n 2\n0: 0 1\n1: 0\n") == ErrorCode::self_loop);
    CHECK(code_of("n two\n") == ErrorCode::parse_error);
    CHECK(code_of("n 2\n0: 1\n0: 1\n1: 0\n") == ErrorCode::parse_error);
    CHECK(code_of("n 2\n0: 5\n1: 0\n") != ErrorCode::io_error);
}

TEST_CASE("vertex text round trip") {
    const auto z3 = GraphFamily::lattice(3);
    CHECK(format_vertex(z3, VertexRef{3, -2, 0}) == "3;-2;0");
    CHECK(parse_vertex(z3, "3;-2;0") == VertexRef{3, -2, 0});
    CHECK(parse_vertex(z3, "3,-2,0") == VertexRef{3, -2, 0});
    CHECK_THROWS_AS(parse_vertex(z3, "3;-2"), Error);
    const auto k5 = GraphFamily::complete(5);
    CHECK(format_vertex(k5, VertexRef::index(4)) == "4");
    CHECK_THROWS_AS(parse_vertex(k5, "5"), Error);
}

TEST_CASE("hash agrees with equality") {
    VertexRefHash h;
    CHECK(h(VertexRef{1, 2}) == h(VertexRef{1, 2}));
    CHECK(VertexRef{1, 2} == VertexRef(std::vector<std::int64_t>{1, 2}));
}
