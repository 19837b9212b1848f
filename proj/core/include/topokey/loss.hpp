#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "topokey/height_map.hpp"
#include "topokey/persistence.hpp"

namespace topokey
{

/// Partial pixel map from a source grid into a target grid. Undefined entries
/// mark pixels that are not covisible.
class CorrespondenceMap
{
public:
    CorrespondenceMap(Shape source, Shape target);

    static CorrespondenceMap identity(Shape shape);

    Shape source() const { return source_; }
    Shape target() const { return target_; }

    /// Throws std::out_of_range if either vertex is outside its grid.
    void set(Vertex from, std::optional<Vertex> to);
    std::optional<Vertex> operator()(Vertex from) const;

    std::size_t defined_count() const;

    friend bool operator==(const CorrespondenceMap&, const CorrespondenceMap&) = default;

private:
    Shape source_;
    Shape target_;
    std::vector<std::int64_t> target_offset_; // -1 when undefined
};

struct LossConfig
{
    double alpha = 10.0;
    bool keep_zero_persistence = false;
};

struct GeneratorTerm
{
    Vertex saddle;
    Vertex peak;
    double persistence;
    double similarity;
};

struct LossResult
{
    double loss = 0.0;
    std::vector<GeneratorTerm> terms;
    Field grad_map1;
    Field grad_map2;
};

/// E = map1[pos] - map2[u(pos)], or exactly 0 where u is undefined.
double error_at(const HeightMap& map1, const HeightMap& map2, const CorrespondenceMap& u, Vertex pos);

/// Loss value and per-generator terms; gradient fields are left empty.
LossResult detector_loss_forward(const HeightMap& map1, const HeightMap& map2, const CorrespondenceMap& u,
                                 const LossConfig& cfg = {});

/// Closed-form gradients with respect to map1 and map2, holding the critical
/// positions of map1's generators fixed.
std::pair<Field, Field> detector_loss_backward(const HeightMap& map1, const HeightMap& map2,
                                               const CorrespondenceMap& u, const LossConfig& cfg = {});

/// Forward and backward from a single persistence computation.
LossResult detector_loss(const HeightMap& map1, const HeightMap& map2, const CorrespondenceMap& u,
                         const LossConfig& cfg = {});

/// Sum of both pair orders: L(map1, map2; u12) + L(map2, map1; u21).
/// Terms are concatenated (first direction first); gradients are summed.
LossResult symmetrized_loss(const HeightMap& map1, const HeightMap& map2, const CorrespondenceMap& u12,
                            const CorrespondenceMap& u21, const LossConfig& cfg = {});

} // namespace topokey
