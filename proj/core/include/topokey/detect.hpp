#pragma once

#include <optional>
#include <vector>

#include "topokey/height_map.hpp"

namespace topokey
{

struct Keypoint
{
    Vertex position;
    double score = 0.0;
    std::optional<double> persistence;

    friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

enum class Ranking
{
    by_score,
    by_persistence,
};

struct DetectConfig
{
    double gamma = 0.7;
    std::optional<std::size_t> max_keypoints;
    Ranking ranking = Ranking::by_score;
    // Drop tie-broken maxima that have an 8-neighbor of exactly equal value.
    bool reject_plateaus = true;
};

/// Strict TieBreakKey maxima of the in-bounds 3x3 neighborhood with value
/// strictly above gamma. Sorted by the configured ranking and truncated to
/// max_keypoints.
std::vector<Keypoint> nms_keypoints(const HeightMap& map, const DetectConfig& cfg = {});

/// Death apexes m(e) of generators with Pers(e) >= min_persistence and value
/// above gamma, ranked by persistence descending.
std::vector<Keypoint> persistence_keypoints(const HeightMap& map, double min_persistence,
                                            const DetectConfig& cfg = {});

/// Keeps the first n keypoints (no-op when n >= size).
void truncate_keypoints(std::vector<Keypoint>& keypoints, std::size_t n);

} // namespace topokey
