#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "support.hpp"
#include "topokey/filtration.hpp"
#include "topokey/io.hpp"

using namespace topokey;
using topokey::test::random_distinct;

TEST_CASE("height map from text")
{
    const auto m = io::parse_matrix_text("4 1\n2 3");
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 2);
    CHECK(m(0, 0) == 4);
    CHECK(m(0, 1) == 1);
    CHECK(m(1, 0) == 2);
    CHECK(m(1, 1) == 3);
}

TEST_CASE("height map rejects bad input")
{
    CHECK_THROWS_AS(io::parse_matrix_text("1 2\n3"), ParseError);
    CHECK_THROWS_AS(io::parse_matrix_text(""), DimensionError);
    CHECK_THROWS_AS(io::parse_matrix_text("1 nan"), ValueError);
    CHECK_THROWS_AS(HeightMap(2, 2, {1, 2, 3}), DimensionError);
    CHECK_THROWS_AS(HeightMap(0, 0, {}), DimensionError);
    CHECK_THROWS_AS(HeightMap::from_rows({{1, 2}, {3}}), DimensionError);
    CHECK_THROWS_AS(HeightMap(1, 1, {std::numeric_limits<double>::infinity()}), ValueError);
}

TEST_CASE("vertex order")
{
    using V = std::vector<Vertex>;
    CHECK(vertex_order(HeightMap::from_rows({{1, 2}, {3, 4}})) == V{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    CHECK(vertex_order(HeightMap::from_rows({{5, 5}, {5, 5}})) == V{{0, 0}, {1, 0}, {0, 1}, {1, 1}});

    const auto order = vertex_order(HeightMap::from_rows({{2, 1}, {1, 2}}));
    const auto pos = [&](Vertex v) { return std::find(order.begin(), order.end(), v) - order.begin(); };
    CHECK(pos({1, 0}) < pos({0, 1}));
}

TEST_CASE("vertex order is a bijection invariant under a global shift")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        Rng rng(seed);
        std::uniform_int_distribution<int> level(0, 5);
        const Shape shape{3 + seed % 5, 2 + seed % 7};
        std::vector<double> v(shape.size()), shifted(shape.size());
        for (std::size_t k = 0; k < v.size(); ++k)
        {
            v[k] = level(rng);
            shifted[k] = v[k] + 17.0;
        }
        const auto order = vertex_order(HeightMap(shape, v));
        CHECK(std::set<Vertex>(order.begin(), order.end()).size() == shape.size());
        CHECK(order == vertex_order(HeightMap(shape, shifted)));
    }
}

TEST_CASE("perturbation below half the minimum gap keeps the vertex order")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        const auto map = random_distinct({6, 9}, seed);
        const double gap = min_value_gap(map);
        Rng rng(seed + 1000);
        std::uniform_real_distribution<double> delta(-0.49 * gap, 0.49 * gap);
        std::vector<double> v(map.values().begin(), map.values().end());
        for (double& x : v)
            x += delta(rng);
        CHECK(vertex_order(map) == vertex_order(HeightMap(map.shape(), v)));
    }
}

TEST_CASE("cell counts")
{
    for (std::size_t h = 1; h <= 16; h += 3)
    {
        for (std::size_t w = 1; w <= 16; w += 2)
        {
            const CubicalGrid grid({h, w});
            CHECK(grid.edge_count() == h * (w - 1) + w * (h - 1));
            CHECK(grid.square_count() == (h - 1) * (w - 1));
            for (std::size_t id = 0; id < grid.cell_count(); ++id)
            {
                const Cell c = grid.cell(id);
                REQUIRE(grid.contains(c));
                REQUIRE(grid.id(c) == id);
                for (Vertex v : grid.vertices(c))
                    REQUIRE(grid.shape().contains(v));
            }
        }
    }
}

TEST_CASE("filtration of a single edge")
{
    const auto f = build_filtration(HeightMap(1, 2, {3, 7}));
    REQUIRE(f.size() == 3);
    CHECK(f[0].cell == Cell::vertex({0, 0}));
    CHECK(f[1].cell == Cell::vertex({0, 1}));
    CHECK(f[2].cell == Cell::edge({0, 0}, Orientation::horizontal));
    CHECK(f[2].value == 7);
}

TEST_CASE("filtration of a 2x2 map matches hand enumeration")
{
    const auto map = HeightMap::from_rows({{4, 1}, {2, 3}});
    // (cell, value of max vertex); sorted by (value, dim).
    struct Row
    {
        Cell cell;
        double value;
    };
    const std::vector<Row> expected{
        {Cell::vertex({0, 1}), 1},
        {Cell::vertex({1, 0}), 2},
        {Cell::vertex({1, 1}), 3},
        {Cell::edge({1, 0}, Orientation::horizontal), 3},
        {Cell::edge({0, 1}, Orientation::vertical), 3},
        {Cell::vertex({0, 0}), 4},
        {Cell::edge({0, 0}, Orientation::horizontal), 4},
        {Cell::edge({0, 0}, Orientation::vertical), 4},
        {Cell::square({0, 0}), 4},
    };
    const auto f = build_filtration(map);
    REQUIRE(f.size() == 9);
    for (std::size_t k = 0; k < 9; ++k)
        CHECK(f[k].value == expected[k].value);
    // Only cells of equal value and dimension may be permuted.
    CHECK(f[0].cell == expected[0].cell);
    CHECK(f[1].cell == expected[1].cell);
    CHECK(f[2].cell == expected[2].cell);
    CHECK(f[5].cell == expected[5].cell);
    CHECK(f[8].cell == Cell::square({0, 0}));
    CHECK(f[8].max_vertex == Vertex{0, 0});
}

TEST_CASE("faces precede cofaces and edges dominate their endpoints")
{
    for (std::uint64_t seed = 0; seed < 30; ++seed)
    {
        Rng rng(seed);
        std::uniform_int_distribution<std::size_t> side(1, 8);
        std::uniform_int_distribution<int> level(0, 3);
        const Shape shape{side(rng), side(rng)};
        std::vector<double> v(shape.size());
        for (double& x : v)
            x = level(rng);
        const HeightMap map(shape, v);
        const auto f = build_filtration(map);
        const auto& grid = f.grid();
        REQUIRE(f.size() == grid.cell_count());
        for (std::size_t p = 0; p < f.size(); ++p)
        {
            const Cell c = f[p].cell;
            REQUIRE(f.position(c) == p);
            for (const Cell& face : grid.boundary(c))
                REQUIRE(f.position(face) < p);
            for (Vertex u : grid.vertices(c))
                REQUIRE(f[p].value >= map(u));
            if (p > 0)
                REQUIRE(!(tie_break_key(map, f[p].max_vertex) < tie_break_key(map, f[p - 1].max_vertex)));
        }
    }
}
