#pragma once

#include <vector>

#include "topokey/loss.hpp"

namespace topokey
{

enum class ValueDomain
{
    raw,      // unconstrained values
    unit_box, // values projected onto [0, 1] after every step
};

struct OptimizeConfig
{
    double alpha = 0.0;
    std::size_t steps = 500;
    double lr = 0.01;
    bool symmetric = false;
    bool keep_zero_persistence = false;
    ValueDomain domain = ValueDomain::raw;
    double divergence_limit = 1e12;
};

/// Statistics over the generators of the first map at one iterate.
struct StepStats
{
    std::size_t step = 0;
    double loss = 0.0;
    std::size_t generators = 0;
    double mean_persistence = 0.0;
    double mean_similarity = 0.0;
};

struct OptimizeResult
{
    std::vector<StepStats> trajectory; // steps + 1 records, the last one after the final update
    HeightMap map1;
    HeightMap map2;
};

/// Plain fixed-step gradient descent of the detector loss directly on the
/// values of both maps. Throws ValueError for steps == 0 or lr <= 0 and
/// Error when |loss| exceeds the divergence limit.
OptimizeResult optimize_pair(const HeightMap& map1, const HeightMap& map2, const CorrespondenceMap& u12,
                             const CorrespondenceMap& u21, const OptimizeConfig& cfg);

} // namespace topokey
