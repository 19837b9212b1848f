#pragma once

#include <vector>

#include "topokey/filtration.hpp"
#include "topokey/height_map.hpp"

namespace topokey
{

/// One finite persistence pair of the sublevel filtration.
///
/// For dim-1 pairs the birth vertex is the creator saddle s(e) (top vertex of
/// the birth edge) and the death vertex is the destroying maximum m(e) (top
/// vertex of the death square). For dim-0 pairs they are the component's
/// minimum and the top vertex of the merging edge.
struct PersistencePair
{
    std::uint8_t dim = 0;
    Cell birth_cell;
    Cell death_cell;
    double birth = 0.0;
    double death = 0.0;
    Vertex birth_vertex;
    Vertex death_vertex;

    double persistence() const { return death - birth; }
    Vertex saddle() const { return birth_vertex; }
    Vertex peak() const { return death_vertex; }

    friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
};

struct PersistenceDiagram
{
    std::vector<PersistencePair> pairs;
    /// Birth cells of classes that never die (one vertex for a grid).
    std::vector<Cell> essential;
};

enum class ZeroPersistence
{
    exclude,
    keep,
};

/// Reference pairing by textbook column reduction of the boundary matrix over
/// GF(2). Includes zero-persistence pairs; pairs appear in order of their
/// death cell.
PersistenceDiagram reduce_boundary_matrix(const FiltrationOrder& filtration);

/// Dim-1 pairs of the sublevel filtration, sorted by filtration position of
/// the birth edge. Computed on the dual graph (squares plus the outer face)
/// with a descending union-find, which reproduces the reference pairing.
std::vector<PersistencePair> h1_generators(const HeightMap& map,
                                           ZeroPersistence zero = ZeroPersistence::exclude);

struct H0Pairs
{
    std::vector<PersistencePair> pairs;
    Vertex essential;
};

/// Dim-0 pairs by ascending union-find over vertices and edges (elder rule).
H0Pairs h0_pairs(const HeightMap& map, ZeroPersistence zero = ZeroPersistence::exclude);

} // namespace topokey
