#ifndef UICT_TRIANGULATION_HPP
#define UICT_TRIANGULATION_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uict/moves.hpp"

namespace uict {

/// A vertex of the layered triangulation, identified by its layer circle
/// (1-based; the rooted boundary is layer 1) and its appearance-order
/// position on that circle (0-based).
struct Vertex {
    std::int32_t slice = 0;
    std::int32_t position = 0;

    friend bool operator==(const Vertex&, const Vertex&) = default;
};

enum class Orientation : std::uint8_t { Up, Down };

/// One triangular face. `strip` is the lower layer index i of the band
/// [i, i+1] the face lives in. An Up face has its base on layer i, a Down
/// face on layer i+1. Faces created by consuming two same-layer boundary
/// edges (the outgrowths a layer may start with) carry all three vertices
/// on layer i and are labelled Up.
struct Triangle {
    std::int32_t strip = 0;
    Orientation orientation = Orientation::Up;
    std::array<Vertex, 3> vertices{};
};

/// Band record as grown: `defects` leading Minus moves consumed that many
/// lower-layer vertices before the band proper started; `down_degrees` are
/// the down-triangle fan sizes of the remaining lower vertices, in order.
/// Sum of down_degrees equals the upper layer size.
struct GrownStrip {
    std::uint32_t defects = 0;
    std::vector<std::uint32_t> down_degrees;

    friend bool operator==(const GrownStrip&, const GrownStrip&) = default;
};

/// Band record in canonical (defect-free) form: one fan size per lower
/// vertex. `shift` records the cyclic re-anchoring applied when the band's
/// outgrowths were removed (zero if it was already clean).
struct CausalStrip {
    std::vector<std::uint32_t> down_degrees;
    std::uint32_t shift = 0;

    friend bool operator==(const CausalStrip&, const CausalStrip&) = default;
};

/// Parse state of a band the move sequence left unfinished.
struct PartialStrip {
    std::uint32_t defects = 0;
    std::vector<std::uint32_t> plus_runs; // Plus-run lengths of fronts already closed
    std::uint32_t current_plus = 0;       // Plus moves since the last closed front
    bool started = false;                 // first Plus of the band seen
    std::uint32_t upper_count = 0;        // vertices created on the unfinished layer
};

struct ValidationReport {
    bool ok = true;
    std::string message;
    std::int64_t triangle_index = -1;

    static ValidationReport pass() { return {}; }
    static ValidationReport fail(std::string msg, std::int64_t index = -1) {
        return {false, std::move(msg), index};
    }
};

/// Triangulation of the layered cylinder as produced by the growth moves.
/// Bands may start with outgrowths (triangles with all vertices on one
/// layer); the trailing band may be unfinished.
class AlmostCausalTriangulation {
public:
    std::int64_t m0() const { return m0_; }
    /// Number of completed layers (the rooted boundary counts as layer 1).
    std::int64_t height() const { return static_cast<std::int64_t>(slice_sizes_.size()); }
    const std::vector<std::uint32_t>& slice_sizes() const { return slice_sizes_; }
    const std::vector<GrownStrip>& strips() const { return strips_; }
    const std::optional<PartialStrip>& partial_strip() const { return partial_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }
    const MoveSequence& source_moves() const { return source_moves_; }
    std::pair<Vertex, Vertex> marked_edge() const { return marked_edge_; }
    /// True when the move sequence ended exactly at a layer stop.
    bool is_stopped() const { return !partial_.has_value(); }

    friend AlmostCausalTriangulation build_from_moves(std::int64_t m0, const MoveSequence& moves);

private:
    std::int64_t m0_ = 1;
    std::vector<std::uint32_t> slice_sizes_;
    std::vector<GrownStrip> strips_;
    std::optional<PartialStrip> partial_;
    std::vector<Triangle> triangles_;
    MoveSequence source_moves_;
    std::pair<Vertex, Vertex> marked_edge_;
};

/// Canonical layered triangulation: every face has exactly one edge on a
/// layer circle. The root is the position-0 vertex of layer 1 with the root
/// edge directed towards position 1.
class CausalTriangulation {
public:
    CausalTriangulation(std::int64_t m0, std::vector<std::uint32_t> slice_sizes,
                        std::vector<CausalStrip> strips);

    std::int64_t m0() const { return m0_; }
    std::int64_t height() const { return static_cast<std::int64_t>(slice_sizes_.size()); }
    const std::vector<std::uint32_t>& slice_sizes() const { return slice_sizes_; }
    const std::vector<CausalStrip>& strips() const { return strips_; }
    Vertex root_vertex() const { return {1, 0}; }
    std::pair<Vertex, Vertex> root_edge() const { return {{1, 0}, {1, slice_sizes_[0] > 1 ? 1 : 0}}; }

    /// Materializes the face list (ups then downs, band by band).
    std::vector<Triangle> triangles() const;

    friend bool operator==(const CausalTriangulation&, const CausalTriangulation&) = default;

private:
    std::int64_t m0_ = 1;
    std::vector<std::uint32_t> slice_sizes_;
    std::vector<CausalStrip> strips_;
};

/// Planar forest dual to a causal triangulation: one tree per rooted-boundary
/// vertex; vertices at depth j are the layer-j circle.
struct RootedForest {
    std::vector<std::uint32_t> depth_populations; // index 0 = depth 1 (the roots)
    /// parents[j][i]: parent position (at depth j+1) of vertex i at depth j+2.
    std::vector<std::vector<std::uint32_t>> parents;

    std::size_t root_count() const { return depth_populations.empty() ? 0 : depth_populations[0]; }
    /// Offspring counts of the vertices at 1-based depth d (d < deepest).
    std::vector<std::uint32_t> child_counts(std::size_t d) const;
};

/// Replays a move sequence through the boundary-cycle construction: every
/// move adds one face at the marked edge. Throws IllegalMoveError on a Minus
/// at boundary length 1.
AlmostCausalTriangulation build_from_moves(std::int64_t m0, const MoveSequence& moves);

/// Exact inverse of build_from_moves, reconstructed from the band records
/// (not from the stored source sequence).
MoveSequence moves_from_triangulation(const AlmostCausalTriangulation& tri);

/// Per band, replaces the leading run Minus^l Plus with Plus Minus^l. The
/// rewritten sequence is defect-free and has the same path probability.
MoveSequence rewrite_defect_runs(std::int64_t m0, const MoveSequence& moves);

/// Turns a stopped grown triangulation into its canonical causal form:
/// outgrowth rewrite plus the cyclic re-anchoring of each band. Layer sizes,
/// per-band face counts and the path probability are preserved.
/// Throws std::invalid_argument if the input is not stopped.
CausalTriangulation remove_defects(const AlmostCausalTriangulation& tri);

ValidationReport validate_almost_causal(const AlmostCausalTriangulation& tri);
/// Raw-view variant for hand-built face lists. slice_sizes[j] is the size of
/// layer j+1; faces of band i may only use layers i and i+1.
ValidationReport validate_almost_causal(const std::vector<Triangle>& triangles,
                                        const std::vector<std::uint32_t>& slice_sizes);

ValidationReport validate_causal(const CausalTriangulation& tri);
/// Raw-view variant: additionally requires exactly one layer-circle edge per
/// face and the root vertex at layer 1, position 0.
ValidationReport validate_causal(const std::vector<Triangle>& triangles,
                                 const std::vector<std::uint32_t>& slice_sizes);

/// Extracts the dual forest: offspring of a lower vertex are the upper
/// vertices of its down-triangle fan.
RootedForest to_forest(const CausalTriangulation& tri);

} // namespace uict

#endif
