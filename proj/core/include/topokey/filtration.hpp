#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "topokey/height_map.hpp"

namespace topokey
{

enum class Orientation : std::uint8_t
{
    none,       // vertices and squares
    horizontal, // edge (i, j) -- (i, j + 1)
    vertical,   // edge (i, j) -- (i + 1, j)
};

/// Elementary cube of the vertex grid. A square is anchored at its top-left
/// vertex.
struct Cell
{
    std::uint8_t dim = 0;
    Vertex anchor{};
    Orientation orientation = Orientation::none;

    static Cell vertex(Vertex v) { return {0, v, Orientation::none}; }
    static Cell edge(Vertex v, Orientation o) { return {1, v, o}; }
    static Cell square(Vertex v) { return {2, v, Orientation::none}; }

    friend bool operator==(const Cell&, const Cell&) = default;
};

/// Geometry of the cubical complex on an H x W vertex grid: H*W vertices,
/// H(W-1) horizontal edges, W(H-1) vertical edges and (H-1)(W-1) squares.
/// Cells are numbered densely in that block order.
class CubicalGrid
{
public:
    explicit CubicalGrid(Shape shape);

    Shape shape() const { return shape_; }
    std::size_t vertex_count() const { return shape_.rows * shape_.cols; }
    std::size_t horizontal_edge_count() const { return shape_.rows * (shape_.cols - 1); }
    std::size_t vertical_edge_count() const { return shape_.cols * (shape_.rows - 1); }
    std::size_t edge_count() const { return horizontal_edge_count() + vertical_edge_count(); }
    std::size_t square_count() const { return (shape_.rows - 1) * (shape_.cols - 1); }
    std::size_t cell_count() const { return vertex_count() + edge_count() + square_count(); }

    std::size_t first_edge_id() const { return vertex_count(); }
    std::size_t first_square_id() const { return vertex_count() + edge_count(); }

    std::size_t id(const Cell& cell) const;
    Cell cell(std::size_t id) const;
    bool contains(const Cell& cell) const;

    /// Vertex faces of a cell: 1, 2 or 4 entries.
    std::vector<Vertex> vertices(const Cell& cell) const;
    /// Codimension-one faces: empty for vertices, 2 vertices for an edge, 4
    /// edges for a square.
    std::vector<Cell> boundary(const Cell& cell) const;

private:
    Shape shape_;
};

struct FilteredCell
{
    Cell cell;
    Vertex max_vertex;
    double value;
};

/// Sublevel filtration of the cubical complex. A cell's key is the
/// TieBreakKey of its maximal vertex; equal keys are ordered by dimension,
/// then by the descending-sorted vertex ranks compared lexicographically.
class FiltrationOrder
{
public:
    const CubicalGrid& grid() const { return grid_; }
    std::span<const FilteredCell> cells() const { return cells_; }
    std::size_t size() const { return cells_.size(); }
    const FilteredCell& operator[](std::size_t position) const { return cells_[position]; }

    /// Position of a cell in the order.
    std::size_t position(const Cell& cell) const { return position_[grid_.id(cell)]; }

private:
    friend FiltrationOrder build_filtration(const HeightMap& map);
    explicit FiltrationOrder(CubicalGrid grid)
        : grid_(grid)
    {
    }

    CubicalGrid grid_;
    std::vector<FilteredCell> cells_;
    std::vector<std::uint32_t> position_;
};

FiltrationOrder build_filtration(const HeightMap& map);

/// Sort key shared by every filtration consumer: (largest rank, dim, then the
/// remaining ranks in descending order, padded with -1).
struct CellOrderKey
{
    std::array<std::int64_t, 4> ranks;
    std::uint8_t dim;

    friend bool operator<(const CellOrderKey& a, const CellOrderKey& b)
    {
        if (a.ranks[0] != b.ranks[0])
            return a.ranks[0] < b.ranks[0];
        if (a.dim != b.dim)
            return a.dim < b.dim;
        return a.ranks < b.ranks;
    }
};

CellOrderKey cell_order_key(const CubicalGrid& grid, std::span<const std::uint32_t> ranks,
                            const Cell& cell);

} // namespace topokey
