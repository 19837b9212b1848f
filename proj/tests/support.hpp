#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "topokey/height_map.hpp"
#include "topokey/persistence.hpp"
#include "topokey/synth.hpp"

namespace topokey::test
{

inline HeightMap example3x3(double scale = 1.0)
{
    auto m = HeightMap::from_rows({{1, 2, 3}, {8, 9, 4}, {7, 6, 5}});
    if (scale == 1.0)
        return m;
    std::vector<double> v(m.values().begin(), m.values().end());
    for (double& x : v)
        x *= scale;
    return HeightMap(m.shape(), std::move(v));
}

inline HeightMap ramp(std::size_t rows, std::size_t cols)
{
    std::vector<double> v(rows * cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            v[i * cols + j] = static_cast<double>(i * cols + j);
    return HeightMap(rows, cols, std::move(v));
}

inline HeightMap constant(std::size_t rows, std::size_t cols, double c)
{
    return HeightMap(rows, cols, std::vector<double>(rows * cols, c));
}

inline HeightMap random_distinct(Shape shape, std::uint64_t seed)
{
    Rng rng(seed);
    return random_distinct_map(shape, rng);
}

inline HeightMap transform(const HeightMap& map, double (*g)(double))
{
    std::vector<double> v(map.values().begin(), map.values().end());
    for (double& x : v)
        x = g(x);
    return HeightMap(map.shape(), std::move(v));
}

inline HeightMap transpose(const HeightMap& map)
{
    std::vector<double> v(map.size());
    for (std::size_t i = 0; i < map.rows(); ++i)
        for (std::size_t j = 0; j < map.cols(); ++j)
            v[j * map.rows() + i] = map(i, j);
    return HeightMap(map.cols(), map.rows(), std::move(v));
}

inline std::vector<PersistencePair> positive_dim(const PersistenceDiagram& d, int dim)
{
    std::vector<PersistencePair> out;
    for (const auto& p : d.pairs)
        if (p.dim == dim && p.death > p.birth)
            out.push_back(p);
    return out;
}

inline bool adjacent8(Vertex a, Vertex b)
{
    return a != b && std::abs(a.row - b.row) <= 1 && std::abs(a.col - b.col) <= 1;
}

} // namespace topokey::test
