#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "topokey/loss.hpp"

namespace topokey
{

struct GradcheckConfig
{
    LossConfig loss;
    double step = 1e-5;
    std::size_t random_samples = 50; // per map, on top of every critical position
    std::uint64_t seed = 0;
    double relative_tolerance = 1e-6;
    double absolute_tolerance = 1e-9; // applies where the analytic entry is exactly 0
    bool symmetric = false;
};

struct GradcheckEntry
{
    int map = 1; // 1 or 2
    Vertex position;
    bool critical = false;
    double analytic = 0.0;
    double numeric = 0.0;
    double error = 0.0; // relative, or absolute when analytic == 0
    bool ok = false;
};

struct GradcheckReport
{
    std::vector<GradcheckEntry> entries;
    double max_relative_error = 0.0;
    double max_absolute_error_at_zero = 0.0;
    double min_gap = 0.0;         // smallest positive value gap of the perturbed filtration map(s)
    bool has_ties = false;        // equal values make the step cross a stratum
    bool step_within_stratum = false;
    bool passed = false;
};

/// Compares the closed-form gradients with central finite differences of the
/// forward loss at every critical position plus random positions. The
/// symmetric mode checks the symmetrized loss and needs `u21`.
GradcheckReport gradcheck(const HeightMap& map1, const HeightMap& map2, const CorrespondenceMap& u12,
                          const std::optional<CorrespondenceMap>& u21, const GradcheckConfig& cfg);

} // namespace topokey
