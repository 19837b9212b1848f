#include "topokey/persistence.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>

namespace topokey
{

namespace
{

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

// GF(2) column addition of two sorted index lists.
std::vector<std::uint32_t> symmetric_difference(const std::vector<std::uint32_t>& a,
                                                const std::vector<std::uint32_t>& b)
{
    std::vector<std::uint32_t> out;
    out.reserve(a.size() + b.size());
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// Union-find whose roots remember a "representative" payload chosen by the
// caller on every merge.
class UnionFind
{
public:
    explicit UnionFind(std::size_t n)
        : parent_(n)
        , rank_(n, 0)
    {
        std::iota(parent_.begin(), parent_.end(), 0u);
    }

    std::uint32_t find(std::uint32_t x)
    {
        std::uint32_t root = x;
        while (parent_[root] != root)
            root = parent_[root];
        while (parent_[x] != root)
        {
            const std::uint32_t next = parent_[x];
            parent_[x] = root;
            x = next;
        }
        return root;
    }

    // Links two distinct roots; returns the surviving root.
    std::uint32_t link(std::uint32_t a, std::uint32_t b)
    {
        if (rank_[a] < rank_[b])
            std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b])
            ++rank_[a];
        return a;
    }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint8_t> rank_;
};

struct EdgeRecord
{
    std::uint64_t key; // top rank * n + bottom rank
    std::uint32_t id;  // cell id
};

std::vector<EdgeRecord> sorted_edges(const CubicalGrid& grid, const std::vector<std::uint32_t>& ranks)
{
    const std::uint64_t n = grid.vertex_count();
    const std::size_t cols = grid.shape().cols;
    std::vector<EdgeRecord> edges;
    edges.reserve(grid.edge_count());
    for (std::size_t id = grid.first_edge_id(); id < grid.first_square_id(); ++id)
    {
        const auto verts = grid.vertices(grid.cell(id));
        std::uint64_t a = ranks[static_cast<std::size_t>(verts[0].row) * cols + verts[0].col];
        std::uint64_t b = ranks[static_cast<std::size_t>(verts[1].row) * cols + verts[1].col];
        if (a < b)
            std::swap(a, b);
        edges.push_back({a * n + b, static_cast<std::uint32_t>(id)});
    }
    std::sort(edges.begin(), edges.end(), [](const EdgeRecord& x, const EdgeRecord& y) { return x.key < y.key; });
    return edges;
}

Vertex top_vertex(const HeightMap& map, const CubicalGrid& grid, const std::vector<std::uint32_t>& ranks,
                  const Cell& cell)
{
    Vertex best{};
    std::int64_t best_rank = -1;
    for (auto v : grid.vertices(cell))
    {
        const std::int64_t r = ranks[map.offset(v)];
        if (r > best_rank)
        {
            best_rank = r;
            best = v;
        }
    }
    return best;
}

bool keep_pair(const PersistencePair& p, ZeroPersistence zero)
{
    return zero == ZeroPersistence::keep || p.death > p.birth;
}

} // namespace

PersistenceDiagram reduce_boundary_matrix(const FiltrationOrder& filtration)
{
    const auto& grid = filtration.grid();
    const std::size_t n = filtration.size();

    std::vector<std::vector<std::uint32_t>> columns(n);
    std::vector<std::uint32_t> pivot_owner(n, kNone);
    std::vector<bool> paired(n, false);
    PersistenceDiagram diagram;

    for (std::size_t j = 0; j < n; ++j)
    {
        const Cell& cell = filtration[j].cell;
        auto& column = columns[j];
        for (const Cell& face : grid.boundary(cell))
            column.push_back(static_cast<std::uint32_t>(filtration.position(face)));
        std::sort(column.begin(), column.end());

        while (!column.empty() && pivot_owner[column.back()] != kNone)
            column = symmetric_difference(column, columns[pivot_owner[column.back()]]);

        if (column.empty())
            continue;
        const std::uint32_t low = column.back();
        pivot_owner[low] = static_cast<std::uint32_t>(j);
        paired[low] = true;
        paired[j] = true;

        const FilteredCell& born = filtration[low];
        const FilteredCell& died = filtration[j];
        PersistencePair pair;
        pair.dim = born.cell.dim;
        pair.birth_cell = born.cell;
        pair.death_cell = died.cell;
        pair.birth = born.value;
        pair.death = died.value;
        pair.birth_vertex = born.max_vertex;
        pair.death_vertex = died.max_vertex;
        diagram.pairs.push_back(pair);
    }

    for (std::size_t j = 0; j < n; ++j)
        if (!paired[j])
            diagram.essential.push_back(filtration[j].cell);
    return diagram;
}

std::vector<PersistencePair> h1_generators(const HeightMap& map, ZeroPersistence zero)
{
    const CubicalGrid grid(map.shape());
    const std::size_t squares = grid.square_count();
    if (squares == 0)
        return {};

    const auto ranks = vertex_ranks(map);
    const auto edges = sorted_edges(grid, ranks);

    // Age of each square within the square sub-order; the outer face is older
    // than every square.
    std::vector<std::uint32_t> square_age(squares + 1);
    {
        std::vector<CellOrderKey> keys;
        keys.reserve(squares);
        for (std::size_t s = 0; s < squares; ++s)
            keys.push_back(cell_order_key(grid, ranks, grid.cell(grid.first_square_id() + s)));
        std::vector<std::uint32_t> order(squares);
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return keys[a] < keys[b]; });
        for (std::size_t k = 0; k < squares; ++k)
            square_age[order[k]] = static_cast<std::uint32_t>(k);
        square_age[squares] = static_cast<std::uint32_t>(squares);
    }

    const auto outer = static_cast<std::uint32_t>(squares);
    const auto rows = static_cast<std::int32_t>(map.rows());
    const auto cols = static_cast<std::int32_t>(map.cols());
    auto square_index = [&](std::int32_t r, std::int32_t c) -> std::uint32_t {
        if (r < 0 || c < 0 || r >= rows - 1 || c >= cols - 1)
            return outer;
        return static_cast<std::uint32_t>(r * (cols - 1) + c);
    };

    UnionFind components(squares + 1);
    // oldest[root] = dual node (square or outer face) of highest filtration age.
    std::vector<std::uint32_t> oldest(squares + 1);
    std::iota(oldest.begin(), oldest.end(), 0u);

    std::vector<std::pair<std::uint64_t, PersistencePair>> found;
    for (auto it = edges.rbegin(); it != edges.rend(); ++it)
    {
        const Cell edge = grid.cell(it->id);
        const Vertex a = edge.anchor;
        std::uint32_t left, right;
        if (edge.orientation == Orientation::horizontal)
        {
            left = square_index(a.row - 1, a.col);
            right = square_index(a.row, a.col);
        }
        else
        {
            left = square_index(a.row, a.col - 1);
            right = square_index(a.row, a.col);
        }

        const std::uint32_t ra = components.find(left);
        const std::uint32_t rb = components.find(right);
        if (ra == rb)
            continue;

        const std::uint32_t oa = oldest[ra];
        const std::uint32_t ob = oldest[rb];
        const std::uint32_t dying = square_age[oa] < square_age[ob] ? oa : ob;
        const std::uint32_t surviving = dying == oa ? ob : oa;
        oldest[components.link(ra, rb)] = surviving;

        const Cell square = grid.cell(grid.first_square_id() + dying);
        PersistencePair pair;
        pair.dim = 1;
        pair.birth_cell = edge;
        pair.death_cell = square;
        pair.birth_vertex = top_vertex(map, grid, ranks, edge);
        pair.death_vertex = top_vertex(map, grid, ranks, square);
        pair.birth = map(pair.birth_vertex);
        pair.death = map(pair.death_vertex);
        if (keep_pair(pair, zero))
            found.emplace_back(it->key, pair);
    }

    std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<PersistencePair> out;
    out.reserve(found.size());
    for (auto& [key, pair] : found)
        out.push_back(pair);
    return out;
}

H0Pairs h0_pairs(const HeightMap& map, ZeroPersistence zero)
{
    const CubicalGrid grid(map.shape());
    const auto ranks = vertex_ranks(map);
    const auto edges = sorted_edges(grid, ranks);

    UnionFind components(grid.vertex_count());
    // lowest[root] = offset of the component's minimum vertex.
    std::vector<std::uint32_t> lowest(grid.vertex_count());
    std::iota(lowest.begin(), lowest.end(), 0u);

    H0Pairs result;
    for (const auto& e : edges)
    {
        const Cell edge = grid.cell(e.id);
        const auto verts = grid.vertices(edge);
        const std::uint32_t ra = components.find(static_cast<std::uint32_t>(map.offset(verts[0])));
        const std::uint32_t rb = components.find(static_cast<std::uint32_t>(map.offset(verts[1])));
        if (ra == rb)
            continue;

        const std::uint32_t la = lowest[ra];
        const std::uint32_t lb = lowest[rb];
        const std::uint32_t dying = ranks[la] > ranks[lb] ? la : lb;
        const std::uint32_t surviving = dying == la ? lb : la;
        lowest[components.link(ra, rb)] = surviving;

        PersistencePair pair;
        pair.dim = 0;
        pair.birth_vertex = map.vertex(dying);
        pair.birth_cell = Cell::vertex(pair.birth_vertex);
        pair.death_cell = edge;
        pair.death_vertex = top_vertex(map, grid, ranks, edge);
        pair.birth = map(pair.birth_vertex);
        pair.death = map(pair.death_vertex);
        if (keep_pair(pair, zero))
            result.pairs.push_back(pair);
    }

    const auto order_min = std::min_element(ranks.begin(), ranks.end()) - ranks.begin();
    result.essential = map.vertex(static_cast<std::size_t>(order_min));
    return result;
}

} // namespace topokey
