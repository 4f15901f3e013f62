#include "uict/triangulation.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>

#include "uict/boundary_chain.hpp"

namespace uict {

namespace {

Orientation classify(const std::array<Vertex, 3>& vs, std::int32_t lower) {
    int on_lower = 0;
    for (const Vertex& v : vs) on_lower += (v.slice == lower);
    return on_lower >= 2 ? Orientation::Up : Orientation::Down;
}

} // namespace

AlmostCausalTriangulation build_from_moves(std::int64_t m0, const MoveSequence& moves) {
    if (m0 < 1) throw std::domain_error("m0 must be >= 1");
    AlmostCausalTriangulation tri;
    tri.m0_ = m0;
    tri.source_moves_ = moves;
    tri.slice_sizes_.push_back(static_cast<std::uint32_t>(m0));
    tri.triangles_.reserve(moves.size());

    std::deque<Vertex> boundary;
    for (std::int64_t p = 0; p < m0; ++p) boundary.push_back({1, static_cast<std::int32_t>(p)});
    std::vector<std::uint32_t> slice_counts{static_cast<std::uint32_t>(m0)};

    StripDetector detector(m0);
    PartialStrip parse;

    for (const Move mv : moves) {
        const auto stop = detector.feed(mv); // validates legality first
        const Vertex front = boundary.front();
        const Vertex back = boundary.back();
        if (mv == Move::Plus) {
            const std::int32_t s = front.slice + 1;
            if (slice_counts.size() < static_cast<std::size_t>(s)) slice_counts.push_back(0);
            const Vertex fresh{s, static_cast<std::int32_t>(slice_counts[s - 1]++)};
            Triangle t;
            t.vertices = {back, fresh, front};
            t.strip = front.slice;
            t.orientation = classify(t.vertices, t.strip);
            tri.triangles_.push_back(t);
            boundary.push_back(fresh);
            parse.started = true;
            ++parse.current_plus;
        } else {
            const Vertex second = boundary[1];
            Triangle t;
            t.vertices = {back, second, front};
            t.strip = std::min({back.slice, second.slice, front.slice});
            t.orientation = classify(t.vertices, t.strip);
            tri.triangles_.push_back(t);
            boundary.pop_front();
            if (!parse.started) {
                ++parse.defects;
            } else {
                parse.plus_runs.push_back(parse.current_plus);
                parse.current_plus = 0;
            }
        }
        if (stop) {
            const std::int64_t t_new = *stop;
            const std::uint32_t upper = static_cast<std::uint32_t>(detector.boundary());
            if (slice_counts[static_cast<std::size_t>(t_new) - 1] != upper)
                throw std::logic_error("layer size mismatch at stop");
            for (const Vertex& v : boundary)
                if (v.slice != t_new)
                    throw std::logic_error("boundary vertex off the completed layer");
            tri.slice_sizes_.push_back(upper);

            GrownStrip strip;
            strip.defects = parse.defects;
            const std::size_t r = parse.plus_runs.size();
            const std::uint32_t m_lower = tri.slice_sizes_[tri.slice_sizes_.size() - 2];
            if (r + parse.defects != m_lower)
                throw std::logic_error("front count mismatch in band parse");
            strip.down_degrees.assign(parse.plus_runs.begin(), parse.plus_runs.end());
            if (r == 1) {
                // single active front: its run already counts the closing fan
            } else {
                strip.down_degrees.front() -= 1; // the band-opening Plus is an up face
                strip.down_degrees.back() += 1;  // the closing Minus adds a down face
            }
            const std::uint32_t fan_sum =
                std::accumulate(strip.down_degrees.begin(), strip.down_degrees.end(), 0u);
            if (fan_sum != upper) throw std::logic_error("fan sum mismatch in band parse");
            tri.strips_.push_back(std::move(strip));
            parse = PartialStrip{};
        }
    }

    if (parse.defects > 0 || parse.started) {
        parse.upper_count = parse.current_plus;
        for (std::uint32_t run : parse.plus_runs) parse.upper_count += run;
        tri.partial_ = parse;
    }
    tri.marked_edge_ = {boundary.back(), boundary.front()};
    return tri;
}

MoveSequence moves_from_triangulation(const AlmostCausalTriangulation& tri) {
    MoveSequence out;
    const auto& sizes = tri.slice_sizes();
    for (std::size_t i = 0; i < tri.strips().size(); ++i) {
        const GrownStrip& strip = tri.strips()[i];
        const std::uint32_t m_lower = sizes[i];
        const std::size_t r = strip.down_degrees.size();
        if (r + strip.defects != m_lower || r == 0)
            throw std::invalid_argument("band records not growth-representable");
        out.insert(out.end(), strip.defects, Move::Minus);
        std::vector<std::uint32_t> runs(strip.down_degrees.begin(), strip.down_degrees.end());
        if (r > 1) {
            runs.front() += 1;
            if (runs.back() == 0) throw std::invalid_argument("band records not growth-representable");
            runs.back() -= 1;
        }
        for (std::uint32_t run : runs) {
            out.insert(out.end(), run, Move::Plus);
            out.push_back(Move::Minus);
        }
    }
    if (tri.partial_strip()) {
        const PartialStrip& p = *tri.partial_strip();
        out.insert(out.end(), p.defects, Move::Minus);
        for (std::uint32_t run : p.plus_runs) {
            out.insert(out.end(), run, Move::Plus);
            out.push_back(Move::Minus);
        }
        out.insert(out.end(), p.current_plus, Move::Plus);
    }
    return out;
}

MoveSequence rewrite_defect_runs(std::int64_t m0, const MoveSequence& moves) {
    MoveSequence out;
    out.reserve(moves.size());
    StripDetector detector(m0);
    std::size_t band_start = 0; // index into `out` where the current band begins
    bool band_has_plus = false;
    for (const Move mv : moves) {
        const auto stop = detector.feed(mv);
        if (mv == Move::Plus && !band_has_plus) {
            // First Plus of the band: emit it ahead of the leading Minus run.
            out.insert(out.begin() + static_cast<std::ptrdiff_t>(band_start), Move::Plus);
            band_has_plus = true;
        } else {
            out.push_back(mv);
        }
        if (stop) {
            band_start = out.size();
            band_has_plus = false;
        }
    }
    return out;
}

CausalTriangulation remove_defects(const AlmostCausalTriangulation& tri) {
    if (!tri.is_stopped())
        throw std::invalid_argument("input is not stopped at a layer boundary");
    std::vector<CausalStrip> strips;
    strips.reserve(tri.strips().size());
    for (const GrownStrip& g : tri.strips()) {
        CausalStrip c;
        c.shift = g.defects;
        c.down_degrees = g.down_degrees;
        c.down_degrees.insert(c.down_degrees.end(), g.defects, 0u);
        strips.push_back(std::move(c));
    }
    return CausalTriangulation(tri.m0(), tri.slice_sizes(), std::move(strips));
}

CausalTriangulation::CausalTriangulation(std::int64_t m0, std::vector<std::uint32_t> slice_sizes,
                                         std::vector<CausalStrip> strips)
    : m0_(m0), slice_sizes_(std::move(slice_sizes)), strips_(std::move(strips)) {
    if (m0_ < 1) throw std::invalid_argument("m0 must be >= 1");
    if (slice_sizes_.empty() || slice_sizes_[0] != static_cast<std::uint32_t>(m0_))
        throw std::invalid_argument("layer sizes must start with m0");
    for (std::uint32_t k : slice_sizes_)
        if (k == 0) throw std::invalid_argument("layer sizes must be positive");
    if (strips_.size() + 1 != slice_sizes_.size())
        throw std::invalid_argument("band count must be height - 1");
    for (std::size_t i = 0; i < strips_.size(); ++i) {
        const CausalStrip& s = strips_[i];
        if (s.down_degrees.size() != slice_sizes_[i])
            throw std::invalid_argument("fan count must equal the lower layer size");
        const std::uint64_t sum =
            std::accumulate(s.down_degrees.begin(), s.down_degrees.end(), std::uint64_t{0});
        if (sum != slice_sizes_[i + 1])
            throw std::invalid_argument("fan sum must equal the upper layer size");
        if (s.shift >= slice_sizes_[i])
            throw std::invalid_argument("band shift must be smaller than the lower layer size");
    }
}

std::vector<Triangle> CausalTriangulation::triangles() const {
    std::vector<Triangle> out;
    for (std::size_t i = 0; i < strips_.size(); ++i) {
        const std::int32_t lower = static_cast<std::int32_t>(i + 1);
        const std::uint32_t m = slice_sizes_[i];
        const std::uint32_t mp = slice_sizes_[i + 1];
        const auto& fans = strips_[i].down_degrees;
        std::uint32_t cum = 0;
        for (std::uint32_t f = 0; f < m; ++f) {
            cum += fans[f];
            Triangle t;
            t.strip = lower;
            t.orientation = Orientation::Up;
            t.vertices = {Vertex{lower, static_cast<std::int32_t>(f)},
                          Vertex{lower, static_cast<std::int32_t>((f + 1) % m)},
                          Vertex{lower + 1, static_cast<std::int32_t>(cum % mp)}};
            out.push_back(t);
        }
        cum = 0;
        for (std::uint32_t f = 0; f < m; ++f) {
            for (std::uint32_t j = 0; j < fans[f]; ++j) {
                const std::uint32_t a = cum + j;
                Triangle t;
                t.strip = lower;
                t.orientation = Orientation::Down;
                t.vertices = {Vertex{lower + 1, static_cast<std::int32_t>(a)},
                              Vertex{lower + 1, static_cast<std::int32_t>((a + 1) % mp)},
                              Vertex{lower, static_cast<std::int32_t>(f)}};
                out.push_back(t);
            }
            cum += fans[f];
        }
    }
    return out;
}

namespace {

bool positions_adjacent(std::int32_t p, std::int32_t q, std::uint32_t circle_size) {
    if (circle_size == 1) return p == 0 && q == 0;
    const auto k = static_cast<std::int32_t>(circle_size);
    return (p + 1) % k == q || (q + 1) % k == p;
}

ValidationReport check_vertices(const std::vector<Triangle>& triangles,
                                const std::vector<std::uint32_t>& slice_sizes,
                                const std::vector<std::uint32_t>* partial_sizes = nullptr) {
    for (std::size_t idx = 0; idx < triangles.size(); ++idx) {
        const Triangle& t = triangles[idx];
        if (t.strip < 1)
            return ValidationReport::fail("face has band index below 1", static_cast<std::int64_t>(idx));
        for (const Vertex& v : t.vertices) {
            if (v.slice != t.strip && v.slice != t.strip + 1)
                return ValidationReport::fail("face vertex lies outside its band",
                                              static_cast<std::int64_t>(idx));
            std::uint32_t size = 0;
            if (static_cast<std::size_t>(v.slice) <= slice_sizes.size())
                size = slice_sizes[static_cast<std::size_t>(v.slice) - 1];
            else if (partial_sizes && static_cast<std::size_t>(v.slice) <= partial_sizes->size())
                size = (*partial_sizes)[static_cast<std::size_t>(v.slice) - 1];
            if (v.position < 0 || static_cast<std::uint32_t>(v.position) >= size)
                return ValidationReport::fail("face vertex position outside its layer",
                                              static_cast<std::int64_t>(idx));
        }
    }
    return ValidationReport::pass();
}

} // namespace

ValidationReport validate_almost_causal(const std::vector<Triangle>& triangles,
                                        const std::vector<std::uint32_t>& slice_sizes) {
    for (std::uint32_t k : slice_sizes)
        if (k == 0) return ValidationReport::fail("layer with zero edges");
    return check_vertices(triangles, slice_sizes);
}

ValidationReport validate_almost_causal(const AlmostCausalTriangulation& tri) {
    std::vector<std::uint32_t> sizes_with_partial = tri.slice_sizes();
    if (tri.partial_strip()) sizes_with_partial.push_back(tri.partial_strip()->upper_count);
    auto report = check_vertices(tri.triangles(), tri.slice_sizes(), &sizes_with_partial);
    if (!report.ok) return report;
    // Face count per completed band equals the band's move count, which is
    // the sum of the two bounding layer sizes.
    std::vector<std::uint64_t> per_band(tri.slice_sizes().size() + 1, 0);
    for (const Triangle& t : tri.triangles()) ++per_band[static_cast<std::size_t>(t.strip)];
    for (std::size_t i = 0; i + 1 < tri.slice_sizes().size(); ++i) {
        const std::uint64_t want = tri.slice_sizes()[i] + tri.slice_sizes()[i + 1];
        if (per_band[i + 1] != want)
            return ValidationReport::fail("band face count differs from layer-size sum");
    }
    return ValidationReport::pass();
}

ValidationReport validate_causal(const std::vector<Triangle>& triangles,
                                 const std::vector<std::uint32_t>& slice_sizes) {
    auto report = validate_almost_causal(triangles, slice_sizes);
    if (!report.ok) return report;
    for (std::size_t idx = 0; idx < triangles.size(); ++idx) {
        const Triangle& t = triangles[idx];
        int circle_edges = 0;
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) {
                const Vertex& u = t.vertices[static_cast<std::size_t>(a)];
                const Vertex& v = t.vertices[static_cast<std::size_t>(b)];
                if (u.slice == v.slice &&
                    positions_adjacent(u.position, v.position,
                                       slice_sizes[static_cast<std::size_t>(u.slice) - 1]))
                    ++circle_edges;
            }
        if (circle_edges != 1)
            return ValidationReport::fail("face must have exactly one layer-circle edge, found " +
                                              std::to_string(circle_edges),
                                          static_cast<std::int64_t>(idx));
    }
    return ValidationReport::pass();
}

ValidationReport validate_causal(const CausalTriangulation& tri) {
    auto report = validate_causal(tri.triangles(), tri.slice_sizes());
    if (!report.ok) return report;
    if (tri.root_vertex().slice != 1 || tri.root_vertex().position != 0)
        return ValidationReport::fail("root vertex must sit at layer 1, position 0");
    return ValidationReport::pass();
}

RootedForest to_forest(const CausalTriangulation& tri) {
    auto report = validate_causal(tri);
    if (!report.ok) throw std::invalid_argument("invalid causal triangulation: " + report.message);
    RootedForest forest;
    forest.depth_populations = tri.slice_sizes();
    for (std::size_t i = 0; i < tri.strips().size(); ++i) {
        const std::uint32_t mp = tri.slice_sizes()[i + 1];
        const auto& fans = tri.strips()[i].down_degrees;
        std::vector<std::uint32_t> parent(mp, 0);
        std::uint32_t cum = 0;
        for (std::uint32_t f = 0; f < fans.size(); ++f) {
            for (std::uint32_t j = 1; j <= fans[f]; ++j) parent[(cum + j) % mp] = f;
            cum += fans[f];
        }
        forest.parents.push_back(std::move(parent));
    }
    return forest;
}

std::vector<std::uint32_t> RootedForest::child_counts(std::size_t d) const {
    if (d < 1 || d >= depth_populations.size())
        throw std::out_of_range("depth must have a successor generation");
    std::vector<std::uint32_t> counts(depth_populations[d - 1], 0);
    for (std::uint32_t parent : parents[d - 1]) ++counts[parent];
    return counts;
}

} // namespace uict
