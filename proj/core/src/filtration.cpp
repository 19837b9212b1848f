#include "topokey/filtration.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <numeric>

namespace topokey
{

CubicalGrid::CubicalGrid(Shape shape)
    : shape_(shape)
{
    if (shape.rows == 0 || shape.cols == 0)
        throw DimensionError("cubical grid needs at least one vertex");
}

bool CubicalGrid::contains(const Cell& c) const
{
    if (!shape_.contains(c.anchor))
        return false;
    const auto r = static_cast<std::size_t>(c.anchor.row);
    const auto k = static_cast<std::size_t>(c.anchor.col);
    switch (c.dim)
    {
    case 0:
        return c.orientation == Orientation::none;
    case 1:
        if (c.orientation == Orientation::horizontal)
            return k + 1 < shape_.cols;
        if (c.orientation == Orientation::vertical)
            return r + 1 < shape_.rows;
        return false;
    case 2:
        return c.orientation == Orientation::none && r + 1 < shape_.rows && k + 1 < shape_.cols;
    default:
        return false;
    }
}

std::size_t CubicalGrid::id(const Cell& c) const
{
    assert(contains(c));
    const auto r = static_cast<std::size_t>(c.anchor.row);
    const auto k = static_cast<std::size_t>(c.anchor.col);
    switch (c.dim)
    {
    case 0:
        return r * shape_.cols + k;
    case 1:
        if (c.orientation == Orientation::horizontal)
            return vertex_count() + r * (shape_.cols - 1) + k;
        return vertex_count() + horizontal_edge_count() + r * shape_.cols + k;
    default:
        return first_square_id() + r * (shape_.cols - 1) + k;
    }
}

Cell CubicalGrid::cell(std::size_t id) const
{
    auto at = [](std::size_t r, std::size_t k) {
        return Vertex{static_cast<std::int32_t>(r), static_cast<std::int32_t>(k)};
    };
    if (id < vertex_count())
        return Cell::vertex(at(id / shape_.cols, id % shape_.cols));
    id -= vertex_count();
    if (id < horizontal_edge_count())
        return Cell::edge(at(id / (shape_.cols - 1), id % (shape_.cols - 1)), Orientation::horizontal);
    id -= horizontal_edge_count();
    if (id < vertical_edge_count())
        return Cell::edge(at(id / shape_.cols, id % shape_.cols), Orientation::vertical);
    id -= vertical_edge_count();
    assert(id < square_count());
    return Cell::square(at(id / (shape_.cols - 1), id % (shape_.cols - 1)));
}

std::vector<Vertex> CubicalGrid::vertices(const Cell& c) const
{
    const Vertex a = c.anchor;
    switch (c.dim)
    {
    case 0:
        return {a};
    case 1:
        if (c.orientation == Orientation::horizontal)
            return {a, {a.row, a.col + 1}};
        return {a, {a.row + 1, a.col}};
    default:
        return {a, {a.row, a.col + 1}, {a.row + 1, a.col}, {a.row + 1, a.col + 1}};
    }
}

std::vector<Cell> CubicalGrid::boundary(const Cell& c) const
{
    const Vertex a = c.anchor;
    switch (c.dim)
    {
    case 0:
        return {};
    case 1:
    {
        std::vector<Cell> faces;
        for (auto v : vertices(c))
            faces.push_back(Cell::vertex(v));
        return faces;
    }
    default:
        return {Cell::edge(a, Orientation::horizontal), Cell::edge({a.row + 1, a.col}, Orientation::horizontal),
                Cell::edge(a, Orientation::vertical), Cell::edge({a.row, a.col + 1}, Orientation::vertical)};
    }
}

CellOrderKey cell_order_key(const CubicalGrid& grid, std::span<const std::uint32_t> ranks, const Cell& cell)
{
    CellOrderKey key{{-1, -1, -1, -1}, cell.dim};
    const auto verts = grid.vertices(cell);
    const std::size_t cols = grid.shape().cols;
    for (std::size_t k = 0; k < verts.size(); ++k)
        key.ranks[k] = ranks[static_cast<std::size_t>(verts[k].row) * cols + static_cast<std::size_t>(verts[k].col)];
    std::sort(key.ranks.begin(), key.ranks.end(), std::greater<>());
    return key;
}

FiltrationOrder build_filtration(const HeightMap& map)
{
    FiltrationOrder f{CubicalGrid(map.shape())};
    const auto& grid = f.grid_;
    const auto ranks = vertex_ranks(map);
    const std::size_t n = grid.cell_count();

    std::vector<CellOrderKey> keys;
    keys.reserve(n);
    for (std::size_t id = 0; id < n; ++id)
        keys.push_back(cell_order_key(grid, ranks, grid.cell(id)));

    std::vector<std::uint32_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0u);
    std::sort(ids.begin(), ids.end(), [&](std::uint32_t a, std::uint32_t b) { return keys[a] < keys[b]; });

    const auto order = vertex_order(map);
    f.cells_.reserve(n);
    f.position_.resize(n);
    for (std::size_t pos = 0; pos < n; ++pos)
    {
        const Cell c = grid.cell(ids[pos]);
        const Vertex top = order[static_cast<std::size_t>(keys[ids[pos]].ranks[0])];
        f.cells_.push_back({c, top, map(top)});
        f.position_[ids[pos]] = static_cast<std::uint32_t>(pos);
    }
    return f;
}

} // namespace topokey
