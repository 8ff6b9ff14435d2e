#pragma once

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace basicwalk {

using Degree = std::uint64_t;
// 1-based index of an outgoing arc under the family's canonical ordering.
using Slot = std::uint64_t;
// 1-based port label on an outgoing arc.
using Port = std::uint64_t;

// Canonical vertex coordinates. Lattice: d integers; hex: (x, y); growing
// tree: child indices from the root (empty = root); finite: {index}.
class VertexRef {
public:
    using Coords = boost::container::small_vector<std::int64_t, 4>;

    VertexRef() = default;
    VertexRef(std::initializer_list<std::int64_t> c) : coords_(c) {}
    explicit VertexRef(std::span<const std::int64_t> c) : coords_(c.begin(), c.end()) {}
    explicit VertexRef(Coords c) : coords_(std::move(c)) {}

    static VertexRef index(std::uint64_t i) { return VertexRef{static_cast<std::int64_t>(i)}; }

    std::span<const std::int64_t> coords() const noexcept { return {coords_.data(), coords_.size()}; }
    Coords& mutable_coords() noexcept { return coords_; }
    std::size_t size() const noexcept { return coords_.size(); }
    std::int64_t operator[](std::size_t i) const { return coords_[i]; }

    friend bool operator==(const VertexRef& a, const VertexRef& b) noexcept {
        return a.coords_ == b.coords_;
    }
    friend bool operator<(const VertexRef& a, const VertexRef& b) noexcept {
        return a.coords_ < b.coords_;
    }

    std::size_t hash() const noexcept;

private:
    Coords coords_;
};

struct VertexRefHash {
    std::size_t operator()(const VertexRef& v) const noexcept { return v.hash(); }
};

enum class FamilyKind { lattice, hex, growing_tree, complete, grid, star, explicit_finite };

// Deepest representable growing-tree level: a level-63 vertex has degree
// 2^63 + 1, the largest that fits in 64 bits.
inline constexpr std::size_t kMaxTreeLevel = 63;

// Immutable descriptor of a graph family. Cheap to copy; explicit adjacency
// is shared.
class GraphFamily {
public:
    static GraphFamily lattice(int dimension);
    static GraphFamily hex();
    static GraphFamily growing_tree();
    static GraphFamily complete(std::uint64_t n);
    // k rows, n columns, row-major indices.
    static GraphFamily grid(std::uint64_t rows, std::uint64_t cols);
    // Hub is vertex 0, leaves 1..m.
    static GraphFamily star(std::uint64_t leaves);
    // Validates symmetry, loop-freeness and connectivity.
    static GraphFamily explicit_finite(std::vector<std::vector<std::uint32_t>> adjacency);

    FamilyKind kind() const noexcept { return kind_; }
    bool is_finite() const noexcept;
    // Finite families only.
    std::uint64_t vertex_count() const;
    // Number of directed arcs (sum of degrees). Finite families only.
    std::uint64_t arc_count() const;

    int dimension() const noexcept { return dimension_; }
    std::uint64_t rows() const noexcept { return a_; }
    std::uint64_t cols() const noexcept { return b_; }
    // Complete: n; star: number of leaves.
    std::uint64_t size_parameter() const noexcept { return a_; }

    // Short identifier: "z2", "hex", "tree", "complete:10", "grid:3x32", "star:8", "explicit:12".
    std::string name() const;

    // Explicit families only.
    const std::vector<std::vector<std::uint32_t>>& adjacency() const;

private:
    struct ExplicitData {
        std::vector<std::vector<std::uint32_t>> adjacency;
        std::vector<std::uint32_t> origin_distance;
    };

    FamilyKind kind_ = FamilyKind::lattice;
    int dimension_ = 0;
    std::uint64_t a_ = 0;
    std::uint64_t b_ = 0;
    std::shared_ptr<const ExplicitData> explicit_;

    friend std::uint64_t distance(const GraphFamily&, const VertexRef&);
};

// Throws Error(invalid_vertex) if v is malformed for g.
void validate_vertex(const GraphFamily& g, const VertexRef& v);

Degree degree(const GraphFamily& g, const VertexRef& v);

// Canonical slot orders: lattice +x1,-x1,+x2,-x2,...; hex +x,-x,vertical;
// tree parent first then children; grid +col,-col,+row,-row (present ones);
// complete ascending index; star hub ascending leaves.
VertexRef neighbor(const GraphFamily& g, const VertexRef& v, Slot slot);

// Inverse of neighbor(): the slot at v whose arc leads to w, or 0 if w is not adjacent.
Slot slot_toward(const GraphFamily& g, const VertexRef& v, const VertexRef& w);

VertexRef origin(const GraphFamily& g);

// Lattice: L-infinity norm; hex, grid and finite: graph distance from the
// origin; growing tree: level.
std::uint64_t distance(const GraphFamily& g, const VertexRef& v);

// Text form used by traces and the CLI: "3;-2" (lattice/hex), "r/0/5" (tree), "7" (finite).
std::string format_vertex(const GraphFamily& g, const VertexRef& v);
VertexRef parse_vertex(const GraphFamily& g, std::string_view text);

// Adjacency file: "n <count>" then "<id>: <neighbor ids...>"; '#' starts a comment.
GraphFamily load_explicit(std::string_view text);
std::string format_explicit(const GraphFamily& g);

}  // namespace basicwalk
