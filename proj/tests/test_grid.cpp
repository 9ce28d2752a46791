#include <doctest.h>

#include <map>
#include <set>

#include "helpers.hpp"
#include "laryngen/grid.hpp"

using namespace laryngen;
using testutil::small_geometry;

TEST_CASE("cell_to_refs follows the row-major id formula") {
    GridGeometry g; // 512/512/64/8

    auto [b0, s0] = cell_to_refs(g, 0, 0);
    CHECK(b0.idb == 0);
    CHECK(s0.idsb == 0);

    auto [b1, s1] = cell_to_refs(g, 511, 511);
    CHECK(b1.idb == 63);
    CHECK(s1.idsb == 63);

    // idb = (100/64)*8 + 200/64 = 1*8+3 = 11; local (36,8) -> idsb = 4*8+1 = 33
    auto [b2, s2] = cell_to_refs(g, 100, 200);
    CHECK(b2.idb == 11);
    CHECK(s2.idsb == 33);

    CHECK_THROWS_AS(cell_to_refs(g, 512, 0), BoundsError);
    CHECK_THROWS_AS(cell_to_refs(g, 0, -1), BoundsError);
}

TEST_CASE("subblock_cells inverts the id formula") {
    GridGeometry g;

    auto cells = subblock_cells(g, {0, 0});
    REQUIRE(cells.size() == 64);
    for (const Cell& c : cells) {
        CHECK(c.x < 8);
        CHECK(c.y < 8);
    }

    // block 11 covers rows 64..127, cols 192..255; idsb 33 = (srow 4, scol 1)
    cells = subblock_cells(g, {11, 33});
    REQUIRE(cells.size() == 64);
    CHECK(cells.front() == Cell{96, 200});
    CHECK(cells.back() == Cell{103, 207});

    // 16x16 grid, block 8, sub 2: idb 3 is the bottom-right block
    // (rows 8..15, cols 8..15); idsb 3 = (srow 0, scol 3) -> rows 8..9,
    // cols 14..15. (idsb 5 would be rows 10..11, cols 10..11.)
    GridGeometry sg = small_geometry();
    cells = subblock_cells(sg, {3, 3});
    REQUIRE(cells.size() == 4);
    CHECK(cells.front() == Cell{8, 14});
    CHECK(cells.back() == Cell{9, 15});
    cells = subblock_cells(sg, {3, 5});
    CHECK(cells.front() == Cell{10, 10});
    CHECK(cells.back() == Cell{11, 11});

    CHECK_THROWS_AS(subblock_cells(g, {64, 0}), BoundsError);
    CHECK_THROWS_AS(subblock_cells(g, {0, 64}), BoundsError);
}

TEST_CASE("cell_to_refs round-trips subblock_cells exhaustively at small geometry") {
    GridGeometry g = small_geometry();
    for (int idb = 0; idb < g.block_count(); ++idb) {
        for (int idsb = 0; idsb < g.subs_per_block(); ++idsb) {
            SubBlockRef s{idb, idsb};
            for (const Cell& c : subblock_cells(g, s)) {
                auto [blk, sub] = cell_to_refs(g, c.x, c.y);
                CHECK(blk.idb == idb);
                CHECK(sub == s);
            }
        }
    }
}

TEST_CASE("sub-block ids exactly tile the grid") {
    for (GridGeometry g : {small_geometry(), GridGeometry{128, 64, 32, 8}}) {
        std::map<Cell, int> hits;
        for (int idb = 0; idb < g.block_count(); ++idb)
            for (int idsb = 0; idsb < g.subs_per_block(); ++idsb)
                for (const Cell& c : subblock_cells(g, {idb, idsb}))
                    hits[c]++;
        CHECK(hits.size() == static_cast<size_t>(g.width) * g.height);
        for (const auto& [c, n] : hits)
            CHECK(n == 1);
    }
}

TEST_CASE("adjacency counts and cross-block neighbors") {
    GridGeometry g;

    // interior sub-block
    CHECK(adjacent_subblocks(g, {9, 9}).size() == 8);
    // grid corner
    CHECK(adjacent_subblocks(g, {0, 0}).size() == 3);

    // top-right sub-block of block 0 touches block 1 across the boundary
    auto n = adjacent_subblocks(g, {0, 7});
    bool crosses = false;
    for (const SubBlockRef& s : n)
        crosses = crosses || (s == SubBlockRef{1, 0});
    CHECK(crosses);

    CHECK(adjacent_subblocks(g, {9, 9}, Adjacency::FourWay).size() == 4);
    CHECK(adjacent_subblocks(g, {0, 0}, Adjacency::FourWay).size() == 2);
}

TEST_CASE("adjacency is symmetric and irreflexive (exhaustive small geometry)") {
    GridGeometry g = small_geometry();
    for (Adjacency adj : {Adjacency::EightWay, Adjacency::FourWay}) {
        for (int idb = 0; idb < g.block_count(); ++idb) {
            for (int idsb = 0; idsb < g.subs_per_block(); ++idsb) {
                SubBlockRef s{idb, idsb};
                auto neighbors = adjacent_subblocks(g, s, adj);
                std::set<SubBlockRef> nset(neighbors.begin(), neighbors.end());
                CHECK(!nset.count(s));
                for (const SubBlockRef& t : neighbors) {
                    auto back = adjacent_subblocks(g, t, adj);
                    CHECK(std::count(back.begin(), back.end(), s) == 1);
                    CHECK(subblocks_adjacent(g, s, t, adj));
                    CHECK(subblocks_adjacent(g, t, s, adj));
                }
            }
        }
    }
}

TEST_CASE("eligible_blocks thresholds and ordering") {
    GridGeometry g;
    CellGrid folds = testutil::uniform_grid(g, SemClass::VocalFolds);
    auto all = eligible_blocks(folds, SemClass::VocalFolds, 1.0);
    REQUIRE(all.size() == 64);
    for (int i = 0; i < 64; ++i)
        CHECK(all[i].idb == i); // ascending

    CellGrid voids = testutil::uniform_grid(g, SemClass::Void);
    CHECK(eligible_blocks(voids, SemClass::VocalFolds, 1.0).empty());

    // checkerboard at block granularity: exactly the 32 vocal-fold blocks
    CellGrid checker = voids;
    int expected = 0;
    for (int x = 0; x < g.height; ++x)
        for (int y = 0; y < g.width; ++y)
            if (((x / 64) + (y / 64)) % 2 == 0)
                checker.set(x, y, SemClass::VocalFolds);
    for (int idb = 0; idb < 64; ++idb)
        expected += ((idb / 8) + (idb % 8)) % 2 == 0;
    auto eligible = eligible_blocks(checker, SemClass::VocalFolds, 1.0);
    CHECK(expected == 32);
    CHECK(eligible.size() == 32);
    for (const BlockRef& b : eligible)
        CHECK(((b.idb / 8) + (b.idb % 8)) % 2 == 0);

    CHECK_THROWS_AS(eligible_blocks(folds, SemClass::VocalFolds, 0.0), ContractError);
    CHECK_THROWS_AS(eligible_blocks(folds, SemClass::VocalFolds, 1.5), ContractError);
}

TEST_CASE("eligible_blocks is monotone in the threshold") {
    Rng rng(21);
    GridGeometry g = small_geometry();
    for (int trial = 0; trial < 10; ++trial) {
        CellGrid grid(g, SemClass::Void);
        for (int x = 0; x < g.height; ++x)
            for (int y = 0; y < g.width; ++y)
                if (rng.bounded(2))
                    grid.set(x, y, SemClass::VocalFolds);
        auto loose = eligible_blocks(grid, SemClass::VocalFolds, 0.25);
        auto tight = eligible_blocks(grid, SemClass::VocalFolds, 0.75);
        for (const BlockRef& b : tight)
            CHECK(std::count(loose.begin(), loose.end(), b) == 1);
    }
}

TEST_CASE("geometry validation rejects non-dividing dimensions") {
    CHECK_THROWS_AS((CellGrid{GridGeometry{100, 100, 64, 8}}), ContractError);
    CHECK_THROWS_AS((CellGrid{GridGeometry{128, 128, 64, 7}}), ContractError);
    CHECK_NOTHROW((CellGrid{GridGeometry{128, 128, 64, 8}}));
}

TEST_CASE("raster_segment endpoints and connectivity") {
    auto line = raster_segment({3, 4}, {3, 4});
    CHECK(line.size() == 1);

    line = raster_segment({0, 0}, {5, 12});
    CHECK(line.front() == Cell{0, 0});
    CHECK(line.back() == Cell{5, 12});
    for (size_t i = 1; i < line.size(); ++i)
        CHECK(chebyshev(line[i - 1], line[i]) == 1);
}
