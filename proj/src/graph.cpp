#include "basicwalk/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <deque>
#include <sstream>

#include "basicwalk/error.hpp"
#include "basicwalk/rng.hpp"

namespace basicwalk {

namespace {

std::uint64_t abs_u(std::int64_t x) {
    return x < 0 ? static_cast<std::uint64_t>(0) - static_cast<std::uint64_t>(x)
                 : static_cast<std::uint64_t>(x);
}

[[noreturn]] void bad_vertex(const GraphFamily& g, const std::string& why) {
    throw Error(ErrorCode::invalid_vertex, g.name() + ": " + why);
}

std::uint64_t finite_index(const GraphFamily& g, const VertexRef& v) {
    if (v.size() != 1) bad_vertex(g, "finite vertex must be a single index");
    if (v[0] < 0 || static_cast<std::uint64_t>(v[0]) >= g.vertex_count())
        bad_vertex(g, "index " + std::to_string(v[0]) + " out of range");
    return static_cast<std::uint64_t>(v[0]);
}

// vertical neighbour offset in the brick-wall picture of the hex lattice
std::int64_t hex_vertical(std::int64_t x, std::int64_t y) {
    return ((x + y) & 1) == 0 ? 1 : -1;
}

bool parse_i64(std::string_view s, std::int64_t& out) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

}  // namespace

std::size_t VertexRef::hash() const noexcept {
    std::uint64_t h = 0x51ed270b27a1c3d5ULL ^ coords_.size();
    for (auto c : coords_) h = mix64(h ^ static_cast<std::uint64_t>(c)) + 0x9e3779b97f4a7c15ULL;
    return static_cast<std::size_t>(h);
}

GraphFamily GraphFamily::lattice(int dimension) {
    if (dimension < 1 || dimension > 64)
        throw Error(ErrorCode::invalid_argument, "lattice dimension must be in [1, 64]");
    GraphFamily g;
    g.kind_ = FamilyKind::lattice;
    g.dimension_ = dimension;
    return g;
}

GraphFamily GraphFamily::hex() {
    GraphFamily g;
    g.kind_ = FamilyKind::hex;
    g.dimension_ = 2;
    return g;
}

GraphFamily GraphFamily::growing_tree() {
    GraphFamily g;
    g.kind_ = FamilyKind::growing_tree;
    return g;
}

GraphFamily GraphFamily::complete(std::uint64_t n) {
    if (n < 2) throw Error(ErrorCode::invalid_argument, "complete graph needs n >= 2");
    if (n > (1ULL << 31)) throw Error(ErrorCode::too_large, "complete graph too large");
    GraphFamily g;
    g.kind_ = FamilyKind::complete;
    g.a_ = n;
    return g;
}

GraphFamily GraphFamily::grid(std::uint64_t rows, std::uint64_t cols) {
    if (rows < 1 || cols < 1) throw Error(ErrorCode::invalid_argument, "grid needs k, n >= 1");
    if (rows * cols < 2) throw Error(ErrorCode::invalid_argument, "1x1 grid has an isolated vertex");
    if (rows > (1ULL << 31) || cols > (1ULL << 31) || rows * cols > (1ULL << 40))
        throw Error(ErrorCode::too_large, "grid too large");
    GraphFamily g;
    g.kind_ = FamilyKind::grid;
    g.a_ = rows;
    g.b_ = cols;
    return g;
}

GraphFamily GraphFamily::star(std::uint64_t leaves) {
    if (leaves < 1) throw Error(ErrorCode::invalid_argument, "star needs m >= 1 leaves");
    if (leaves > (1ULL << 40)) throw Error(ErrorCode::too_large, "star too large");
    GraphFamily g;
    g.kind_ = FamilyKind::star;
    g.a_ = leaves;
    return g;
}

GraphFamily GraphFamily::explicit_finite(std::vector<std::vector<std::uint32_t>> adj) {
    const std::size_t n = adj.size();
    if (n < 2) throw Error(ErrorCode::invalid_argument, "explicit graph needs at least 2 vertices");
    for (std::size_t u = 0; u < n; ++u) {
        auto sorted = adj[u];
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw Error(ErrorCode::parse_error, "duplicate neighbor at vertex " + std::to_string(u));
        for (auto w : adj[u]) {
            if (w >= n)
                throw Error(ErrorCode::parse_error,
                            "neighbor " + std::to_string(w) + " of " + std::to_string(u) + " out of range");
            if (w == u) throw Error(ErrorCode::self_loop, "self-loop at vertex " + std::to_string(u));
        }
    }
    for (std::size_t u = 0; u < n; ++u) {
        for (auto w : adj[u]) {
            const auto& back = adj[w];
            if (std::find(back.begin(), back.end(), static_cast<std::uint32_t>(u)) == back.end())
                throw Error(ErrorCode::asymmetric_adjacency,
                            "arc " + std::to_string(u) + "->" + std::to_string(w) + " has no reverse");
        }
    }
    constexpr auto unseen = static_cast<std::uint32_t>(-1);
    std::vector<std::uint32_t> dist(n, unseen);
    std::deque<std::uint32_t> queue{0};
    dist[0] = 0;
    while (!queue.empty()) {
        auto u = queue.front();
        queue.pop_front();
        for (auto w : adj[u]) {
            if (dist[w] == unseen) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    for (std::size_t u = 0; u < n; ++u)
        if (dist[u] == unseen)
            throw Error(ErrorCode::disconnected_graph, "vertex " + std::to_string(u) + " unreachable from 0");

    GraphFamily g;
    g.kind_ = FamilyKind::explicit_finite;
    g.a_ = n;
    g.explicit_ = std::make_shared<const ExplicitData>(ExplicitData{std::move(adj), std::move(dist)});
    return g;
}

bool GraphFamily::is_finite() const noexcept {
    switch (kind_) {
    case FamilyKind::lattice:
    case FamilyKind::hex:
    case FamilyKind::growing_tree: return false;
    default: return true;
    }
}

std::uint64_t GraphFamily::vertex_count() const {
    switch (kind_) {
    case FamilyKind::complete:
    case FamilyKind::explicit_finite: return a_;
    case FamilyKind::grid: return a_ * b_;
    case FamilyKind::star: return a_ + 1;
    default: throw Error(ErrorCode::infinite_family, name() + " has infinitely many vertices");
    }
}

std::uint64_t GraphFamily::arc_count() const {
    switch (kind_) {
    case FamilyKind::complete: return a_ * (a_ - 1);
    case FamilyKind::grid: return 2 * (a_ * (b_ - 1) + b_ * (a_ - 1));
    case FamilyKind::star: return 2 * a_;
    case FamilyKind::explicit_finite: {
        std::uint64_t s = 0;
        for (const auto& nb : explicit_->adjacency) s += nb.size();
        return s;
    }
    default: throw Error(ErrorCode::infinite_family, name() + " has infinitely many arcs");
    }
}

std::string GraphFamily::name() const {
    switch (kind_) {
    case FamilyKind::lattice: return "z" + std::to_string(dimension_);
    case FamilyKind::hex: return "hex";
    case FamilyKind::growing_tree: return "tree";
    case FamilyKind::complete: return "complete:" + std::to_string(a_);
    case FamilyKind::grid: return "grid:" + std::to_string(a_) + "x" + std::to_string(b_);
    case FamilyKind::star: return "star:" + std::to_string(a_);
    case FamilyKind::explicit_finite: return "explicit:" + std::to_string(a_);
    }
    return "?";
}

const std::vector<std::vector<std::uint32_t>>& GraphFamily::adjacency() const {
    if (kind_ != FamilyKind::explicit_finite)
        throw Error(ErrorCode::invalid_argument, name() + " has no explicit adjacency");
    return explicit_->adjacency;
}

void validate_vertex(const GraphFamily& g, const VertexRef& v) {
    switch (g.kind()) {
    case FamilyKind::lattice:
        if (v.size() != static_cast<std::size_t>(g.dimension()))
            bad_vertex(g, "expected " + std::to_string(g.dimension()) + " coordinates");
        return;
    case FamilyKind::hex:
        if (v.size() != 2) bad_vertex(g, "expected 2 coordinates");
        return;
    case FamilyKind::growing_tree:
        if (v.size() > kMaxTreeLevel) bad_vertex(g, "level beyond " + std::to_string(kMaxTreeLevel));
        // the parent of a level-(k+1) vertex sits at level k and has 2^k children
        for (std::size_t k = 0; k < v.size(); ++k)
            if (v[k] < 0 || static_cast<std::uint64_t>(v[k]) >= (1ULL << k))
                bad_vertex(g, "child index " + std::to_string(v[k]) + " invalid at level " + std::to_string(k + 1));
        return;
    default:
        finite_index(g, v);
        return;
    }
}

Degree degree(const GraphFamily& g, const VertexRef& v) {
    validate_vertex(g, v);
    switch (g.kind()) {
    case FamilyKind::lattice: return 2 * static_cast<Degree>(g.dimension());
    case FamilyKind::hex: return 3;
    case FamilyKind::growing_tree:
        return v.size() == 0 ? 1 : (1ULL << v.size()) + 1;
    case FamilyKind::complete: return g.size_parameter() - 1;
    case FamilyKind::grid: {
        const auto i = static_cast<std::uint64_t>(v[0]);
        const auto r = i / g.cols(), c = i % g.cols();
        Degree d = 0;
        d += c + 1 < g.cols();
        d += c > 0;
        d += r + 1 < g.rows();
        d += r > 0;
        return d;
    }
    case FamilyKind::star: return v[0] == 0 ? g.size_parameter() : 1;
    case FamilyKind::explicit_finite: return g.adjacency()[static_cast<std::size_t>(v[0])].size();
    }
    return 0;
}

VertexRef neighbor(const GraphFamily& g, const VertexRef& v, Slot slot) {
    const Degree deg = degree(g, v);
    if (slot < 1 || slot > deg)
        throw Error(ErrorCode::slot_out_of_range,
                    "slot " + std::to_string(slot) + " not in [1, " + std::to_string(deg) + "] at " +
                        format_vertex(g, v));
    switch (g.kind()) {
    case FamilyKind::lattice: {
        VertexRef w = v;
        w.mutable_coords()[(slot - 1) / 2] += (slot % 2 == 1) ? 1 : -1;
        return w;
    }
    case FamilyKind::hex: {
        const auto x = v[0], y = v[1];
        if (slot == 1) return {x + 1, y};
        if (slot == 2) return {x - 1, y};
        return {x, y + hex_vertical(x, y)};
    }
    case FamilyKind::growing_tree: {
        VertexRef w = v;
        if (v.size() == 0) {
            w.mutable_coords().push_back(0);
            return w;
        }
        if (slot == 1) {
            w.mutable_coords().pop_back();
            return w;
        }
        if (v.size() >= kMaxTreeLevel)
            throw Error(ErrorCode::depth_limit, "growing tree deeper than level " + std::to_string(kMaxTreeLevel));
        w.mutable_coords().push_back(static_cast<std::int64_t>(slot - 2));
        return w;
    }
    case FamilyKind::complete: {
        const auto i = static_cast<std::uint64_t>(v[0]);
        return VertexRef::index(slot - 1 < i ? slot - 1 : slot);
    }
    case FamilyKind::grid: {
        const auto i = static_cast<std::uint64_t>(v[0]);
        const auto r = i / g.cols(), c = i % g.cols();
        Slot k = 0;
        if (c + 1 < g.cols() && ++k == slot) return VertexRef::index(i + 1);
        if (c > 0 && ++k == slot) return VertexRef::index(i - 1);
        if (r + 1 < g.rows() && ++k == slot) return VertexRef::index(i + g.cols());
        return VertexRef::index(i - g.cols());
    }
    case FamilyKind::star:
        return v[0] == 0 ? VertexRef::index(slot) : VertexRef::index(0);
    case FamilyKind::explicit_finite:
        return VertexRef::index(g.adjacency()[static_cast<std::size_t>(v[0])][slot - 1]);
    }
    return {};
}

Slot slot_toward(const GraphFamily& g, const VertexRef& v, const VertexRef& w) {
    validate_vertex(g, v);
    if (w.size() != v.size() && g.kind() != FamilyKind::growing_tree) return 0;
    switch (g.kind()) {
    case FamilyKind::lattice: {
        Slot found = 0;
        for (std::size_t k = 0; k < v.size(); ++k) {
            const auto diff = w[k] - v[k];
            if (diff == 0) continue;
            if (found != 0 || (diff != 1 && diff != -1)) return 0;
            found = 2 * k + (diff == 1 ? 1 : 2);
        }
        return found;
    }
    case FamilyKind::hex:
        if (w[1] == v[1] && w[0] == v[0] + 1) return 1;
        if (w[1] == v[1] && w[0] == v[0] - 1) return 2;
        if (w[0] == v[0] && w[1] == v[1] + hex_vertical(v[0], v[1])) return 3;
        return 0;
    case FamilyKind::growing_tree: {
        const auto cv = v.coords(), cw = w.coords();
        if (cw.size() + 1 == cv.size() && std::equal(cw.begin(), cw.end(), cv.begin()))
            return 1;
        if (cw.size() == cv.size() + 1 && std::equal(cv.begin(), cv.end(), cw.begin())) {
            if (cw.back() < 0 || static_cast<std::uint64_t>(cw.back()) >= (1ULL << cv.size())) return 0;
            return cv.empty() ? 1 : static_cast<Slot>(cw.back()) + 2;
        }
        return 0;
    }
    default: {
        if (w[0] < 0 || static_cast<std::uint64_t>(w[0]) >= g.vertex_count()) return 0;
        const Degree deg = degree(g, v);
        if (g.kind() == FamilyKind::complete) {
            if (w[0] == v[0]) return 0;
            return w[0] < v[0] ? static_cast<Slot>(w[0]) + 1 : static_cast<Slot>(w[0]);
        }
        for (Slot s = 1; s <= deg; ++s)
            if (neighbor(g, v, s) == w) return s;
        return 0;
    }
    }
}

VertexRef origin(const GraphFamily& g) {
    switch (g.kind()) {
    case FamilyKind::lattice: {
        VertexRef::Coords c(static_cast<std::size_t>(g.dimension()), 0);
        return VertexRef(std::move(c));
    }
    case FamilyKind::hex: return {0, 0};
    case FamilyKind::growing_tree: return VertexRef{};
    default: return VertexRef::index(0);
    }
}

std::uint64_t distance(const GraphFamily& g, const VertexRef& v) {
    validate_vertex(g, v);
    switch (g.kind()) {
    case FamilyKind::lattice: {
        std::uint64_t m = 0;
        for (auto c : v.coords()) m = std::max(m, abs_u(c));
        return m;
    }
    case FamilyKind::hex: {
        const std::uint64_t ax = abs_u(v[0]), ay = abs_u(v[1]);
        if (ax >= ay) return ax + ay;
        if (((v[0] + v[1]) & 1) == 0) return 2 * ay;
        return v[1] > 0 ? 2 * ay - 1 : 2 * ay + 1;
    }
    case FamilyKind::growing_tree: return v.size();
    case FamilyKind::complete:
    case FamilyKind::star: return v[0] == 0 ? 0 : 1;
    case FamilyKind::grid: {
        const auto i = static_cast<std::uint64_t>(v[0]);
        return i / g.cols() + i % g.cols();
    }
    case FamilyKind::explicit_finite: return g.explicit_->origin_distance[static_cast<std::size_t>(v[0])];
    }
    return 0;
}

std::string format_vertex(const GraphFamily& g, const VertexRef& v) {
    std::string out;
    if (g.kind() == FamilyKind::growing_tree) {
        out = "r";
        for (auto c : v.coords()) out += "/" + std::to_string(c);
        return out;
    }
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) out += ';';
        out += std::to_string(v[k]);
    }
    return out;
}

VertexRef parse_vertex(const GraphFamily& g, std::string_view text) {
    VertexRef::Coords coords;
    auto fail = [&]() -> VertexRef {
        throw Error(ErrorCode::invalid_vertex, "cannot parse vertex '" + std::string(text) + "' for " + g.name());
    };
    if (g.kind() == FamilyKind::growing_tree) {
        if (text.empty() || text.front() != 'r') return fail();
        std::string_view rest = text.substr(1);
        while (!rest.empty()) {
            if (rest.front() != '/') return fail();
            rest.remove_prefix(1);
            auto end = rest.find('/');
            std::int64_t c;
            if (!parse_i64(rest.substr(0, end), c)) return fail();
            coords.push_back(c);
            rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end);
        }
    } else {
        std::string_view rest = text;
        while (true) {
            auto end = rest.find_first_of(";,");
            std::int64_t c;
            if (!parse_i64(rest.substr(0, end), c)) return fail();
            coords.push_back(c);
            if (end == std::string_view::npos) break;
            rest = rest.substr(end + 1);
        }
    }
    VertexRef v(std::move(coords));
    validate_vertex(g, v);
    return v;
}

GraphFamily load_explicit(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    std::int64_t count = -1;
    std::vector<std::vector<std::uint32_t>> adj;
    std::vector<bool> seen;
    auto fail = [&](const std::string& why) {
        throw Error(ErrorCode::parse_error, "line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (count < 0) {
            if (head != "n" || !(ls >> count) || count < 2 || count > (1 << 24)) fail("expected 'n <count>' header");
            std::string extra;
            if (ls >> extra) fail("trailing text after header");
            adj.resize(static_cast<std::size_t>(count));
            seen.assign(static_cast<std::size_t>(count), false);
            continue;
        }
        if (head.back() != ':') fail("expected '<id>:'");
        std::int64_t id;
        if (!parse_i64(std::string_view(head).substr(0, head.size() - 1), id) || id < 0 || id >= count)
            fail("bad vertex id '" + head + "'");
        if (seen[static_cast<std::size_t>(id)]) fail("vertex " + std::to_string(id) + " listed twice");
        seen[static_cast<std::size_t>(id)] = true;
        std::string tok;
        while (ls >> tok) {
            std::int64_t w;
            if (!parse_i64(tok, w) || w < 0 || w >= count) fail("bad neighbor id '" + tok + "'");
            adj[static_cast<std::size_t>(id)].push_back(static_cast<std::uint32_t>(w));
        }
    }
    if (count < 0) throw Error(ErrorCode::parse_error, "missing 'n <count>' header");
    return GraphFamily::explicit_finite(std::move(adj));
}

std::string format_explicit(const GraphFamily& g) {
    std::ostringstream out;
    const auto n = g.vertex_count();
    out << "n " << n << "\n";
    for (std::uint64_t u = 0; u < n; ++u) {
        const auto v = VertexRef::index(u);
        out << u << ":";
        for (Slot s = 1; s <= degree(g, v); ++s) out << ' ' << neighbor(g, v, s)[0];
        out << "\n";
    }
    return out.str();
}

}  // namespace basicwalk
