#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "uict/boundary_chain.hpp"
#include "uict/exact.hpp"
#include "uict/io.hpp"
#include "uict/triangulation.hpp"

using namespace uict;

namespace {

// Random permitted move sequence of the given length.
MoveSequence random_permitted(std::int64_t m0, std::size_t length, RngStream& rng) {
    MoveSequence moves;
    std::int64_t m = m0;
    for (std::size_t i = 0; i < length; ++i) {
        const Move mv = (m == 1 || rng.uniform() < 0.5) ? Move::Plus : Move::Minus;
        moves.push_back(mv);
        m += sign(mv);
    }
    return moves;
}

} // namespace

TEST_CASE("reference layer construction") {
    const auto tri = build_from_moves(3, parse_moves("+++-+--"));
    CHECK(tri.height() == 2);
    CHECK(tri.slice_sizes() == std::vector<std::uint32_t>{3, 4});
    CHECK(tri.triangles().size() == 7);
    CHECK(tri.is_stopped());
    REQUIRE(tri.strips().size() == 1);
    CHECK(tri.strips()[0].defects == 0);
    CHECK(tri.strips()[0].down_degrees == std::vector<std::uint32_t>{2, 1, 1});
    CHECK(validate_almost_causal(tri).ok);

    int ups = 0, downs = 0;
    for (const Triangle& t : tri.triangles())
        (t.orientation == Orientation::Up ? ups : downs)++;
    CHECK(ups == 3);   // one per lower-layer edge
    CHECK(downs == 4); // one per upper-layer edge
}

TEST_CASE("minimal band") {
    const auto tri = build_from_moves(1, parse_moves("+-"));
    CHECK(tri.slice_sizes() == std::vector<std::uint32_t>{1, 1});
    CHECK(tri.triangles().size() == 2);
    REQUIRE(tri.strips().size() == 1);
    CHECK(tri.strips()[0].down_degrees == std::vector<std::uint32_t>{1});
    CHECK(validate_almost_causal(tri).ok);
}

TEST_CASE("band with a leading outgrowth") {
    const auto tri = build_from_moves(2, parse_moves("-++-"));
    CHECK(tri.is_stopped());
    CHECK(tri.slice_sizes() == std::vector<std::uint32_t>{2, 2});
    REQUIRE(tri.strips().size() == 1);
    CHECK(tri.strips()[0].defects == 1);
    CHECK(tri.strips()[0].down_degrees == std::vector<std::uint32_t>{2});
    CHECK(validate_almost_causal(tri).ok);
    // The outgrowth face fails the one-circle-edge rule.
    CHECK_FALSE(validate_causal(tri.triangles(), tri.slice_sizes()).ok);

    SUBCASE("a trailing half-built band is recorded and rejected for removal") {
        const auto longer = build_from_moves(2, parse_moves("-++--"));
        CHECK(longer.triangles().size() == 5);
        CHECK_FALSE(longer.is_stopped());
        REQUIRE(longer.partial_strip().has_value());
        CHECK(longer.partial_strip()->defects == 1);
        CHECK_THROWS_AS(remove_defects(longer), std::invalid_argument);
        CHECK(moves_from_triangulation(longer) == parse_moves("-++--"));
    }
}

TEST_CASE("illegal moves are rejected with their index") {
    CHECK_THROWS_AS(build_from_moves(1, parse_moves("-")), IllegalMoveError);
    try {
        build_from_moves(2, parse_moves("+---"));
        FAIL("expected a throw");
    } catch (const IllegalMoveError& e) {
        CHECK(e.index() == 3);
    }
}

TEST_CASE("move reconstruction is the exact inverse") {
    RngStream rng(17, 0);
    for (int rep = 0; rep < 200; ++rep) {
        const auto m0 = static_cast<std::int64_t>(1 + rng.next_u64() % 4);
        const auto len = static_cast<std::size_t>(rng.next_u64() % 21);
        const MoveSequence moves = random_permitted(m0, len, rng);
        const auto tri = build_from_moves(m0, moves);
        CHECK(moves_from_triangulation(tri) == moves);
    }
}

TEST_CASE("grown triangulations validate") {
    RngStream rng(18, 0);
    for (int rep = 0; rep < 1000; ++rep) {
        const auto m0 = static_cast<std::int64_t>(1 + rng.next_u64() % 3);
        const auto len = static_cast<std::size_t>(rng.next_u64() % 40);
        const auto tri = build_from_moves(m0, random_permitted(m0, len, rng));
        const auto report = validate_almost_causal(tri);
        REQUIRE_MESSAGE(report.ok, report.message);
    }
}

TEST_CASE("hand-built violations are reported") {
    SUBCASE("face spanning distant layers") {
        std::vector<Triangle> faces{{1, Orientation::Up, {Vertex{1, 0}, Vertex{1, 1}, Vertex{3, 0}}}};
        const std::vector<std::uint32_t> sizes{2, 1, 1};
        const auto report = validate_almost_causal(faces, sizes);
        CHECK_FALSE(report.ok);
        CHECK(report.triangle_index == 0);
    }
    SUBCASE("empty layer") {
        CHECK_FALSE(validate_almost_causal({}, {2, 0}).ok);
    }
    SUBCASE("two circle edges") {
        // An outgrowth face: all three vertices on one layer.
        std::vector<Triangle> faces{{1, Orientation::Up, {Vertex{1, 2}, Vertex{1, 1}, Vertex{1, 0}}}};
        const std::vector<std::uint32_t> sizes{3, 1};
        CHECK(validate_almost_causal(faces, sizes).ok);
        CHECK_FALSE(validate_causal(faces, sizes).ok);
    }
}

TEST_CASE("defect removal") {
    SUBCASE("clean input is passed through") {
        const auto tri = build_from_moves(3, parse_moves("+++-+--"));
        const auto ct = remove_defects(tri);
        CHECK(ct.slice_sizes() == tri.slice_sizes());
        CHECK(ct.strips()[0].down_degrees == std::vector<std::uint32_t>{2, 1, 1});
        CHECK(ct.strips()[0].shift == 0);
        CHECK(validate_causal(ct).ok);
        CHECK(ct.root_vertex() == Vertex{1, 0});
    }
    SUBCASE("one-step re-anchoring") {
        const auto tri = build_from_moves(2, parse_moves("-++-"));
        const auto ct = remove_defects(tri);
        CHECK(ct.strips()[0].shift == 1);
        CHECK(ct.strips()[0].down_degrees == std::vector<std::uint32_t>{2, 0});
        CHECK(validate_causal(ct).ok);
    }
    SUBCASE("layer sizes and face counts preserved") {
        RngStream rng(19, 0);
        for (int rep = 0; rep < 200; ++rep) {
            const auto m0 = static_cast<std::int64_t>(1 + rng.next_u64() % 3);
            auto moves = random_permitted(m0, 30, rng);
            auto tri = build_from_moves(m0, moves);
            if (!tri.is_stopped()) {
                // Trim to the last completed layer.
                moves = moves_from_triangulation(tri);
                std::size_t keep = moves.size();
                const auto& p = *tri.partial_strip();
                std::size_t partial_moves = p.defects + p.current_plus;
                for (auto run : p.plus_runs) partial_moves += run + 1;
                keep -= partial_moves;
                moves.resize(keep);
                tri = build_from_moves(m0, moves);
            }
            const auto ct = remove_defects(tri);
            CHECK(ct.slice_sizes() == tri.slice_sizes());
            CHECK(ct.triangles().size() == tri.triangles().size());
            const auto report = validate_causal(ct);
            REQUIRE_MESSAGE(report.ok, report.message);
        }
    }
}

TEST_CASE("outgrowth rewrite preserves the path probability") {
    RngStream rng(23, 0);
    for (int rep = 0; rep < 300; ++rep) {
        const auto m0 = static_cast<std::int64_t>(1 + rng.next_u64() % 4);
        const MoveSequence moves = random_permitted(m0, 24, rng);
        const MoveSequence rewritten = rewrite_defect_runs(m0, moves);
        CHECK(rewritten.size() == moves.size());
        CHECK(exact::path_probability(m0, moves) == exact::path_probability(m0, rewritten));
        // The rewritten sequence parses without outgrowths in completed bands.
        const auto tri = build_from_moves(m0, rewritten);
        for (const GrownStrip& s : tri.strips()) CHECK(s.defects == 0);
    }
}

TEST_CASE("dual forest") {
    SUBCASE("reference example") {
        const auto ct = remove_defects(build_from_moves(3, parse_moves("+++-+--")));
        const RootedForest forest = to_forest(ct);
        CHECK(forest.root_count() == 3);
        CHECK(forest.depth_populations == std::vector<std::uint32_t>{3, 4});
        CHECK(forest.child_counts(1) == std::vector<std::uint32_t>{2, 1, 1});
    }
    SUBCASE("single chain") {
        const auto ct = remove_defects(build_from_moves(1, parse_moves("+-")));
        const RootedForest forest = to_forest(ct);
        CHECK(forest.root_count() == 1);
        CHECK(forest.child_counts(1) == std::vector<std::uint32_t>{1});
    }
    SUBCASE("depth populations equal layer sizes") {
        RngStream rng(29, 0);
        for (int rep = 0; rep < 100; ++rep) {
            StripDetector det(1);
            MoveSequence moves;
            while (det.stop_count() < 4) {
                const Move mv = draw_move(det.boundary(), rng);
                det.feed(mv);
                moves.push_back(mv);
            }
            const auto ct = remove_defects(build_from_moves(1, moves));
            const RootedForest forest = to_forest(ct);
            CHECK(forest.depth_populations == ct.slice_sizes());
            for (std::size_t d = 1; d <= forest.parents.size(); ++d) {
                CHECK(forest.child_counts(d) == ct.strips()[d - 1].down_degrees);
            }
        }
    }
}

TEST_CASE("json round trips") {
    SUBCASE("grown form") {
        const auto tri = build_from_moves(2, parse_moves("-++-"));
        const auto j = io::to_json(tri);
        const auto back = io::almost_causal_from_json(j);
        CHECK(back.slice_sizes() == tri.slice_sizes());
        CHECK(back.source_moves() == tri.source_moves());
        CHECK(back.strips() == tri.strips());
    }
    SUBCASE("causal form") {
        const auto ct = remove_defects(build_from_moves(3, parse_moves("+++-+--")));
        const auto back = io::causal_from_json(io::to_json(ct));
        CHECK(back == ct);
    }
    SUBCASE("tampered import is rejected") {
        auto j = io::to_json(remove_defects(build_from_moves(1, parse_moves("+-"))));
        j["slice_sizes"] = std::vector<int>{1, 5}; // breaks the fan-sum invariant
        CHECK_THROWS_AS(io::causal_from_json(j), std::invalid_argument);
    }
}

TEST_CASE("boundary vertices sit on the top layer at stops") {
    RngStream rng(31, 0);
    StripDetector det(2);
    MoveSequence moves;
    while (det.stop_count() < 5) {
        const Move mv = draw_move(det.boundary(), rng);
        det.feed(mv);
        moves.push_back(mv);
    }
    const auto tri = build_from_moves(2, moves);
    const auto [from, to] = tri.marked_edge();
    CHECK(from.slice == tri.height());
    CHECK(to.slice == tri.height());
}
