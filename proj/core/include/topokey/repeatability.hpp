#pragma once

#include <map>
#include <span>
#include <vector>

#include "topokey/geometry.hpp"

namespace topokey
{

struct EvalConfig
{
    /// Pixel thresholds, positive and ascending.
    std::vector<double> thresholds{1.0, 2.0, 3.0, 4.0, 5.0};
};

struct RepeatabilityScores
{
    std::vector<double> thresholds;
    std::vector<double> scores; // one per threshold
    double mean = 0.0;
    std::size_t covisible_a = 0;
    std::size_t covisible_b = 0;
};

/// Keypoints of `a` (image 1) and `b` (image 2) where h maps image 1 to
/// image 2. Only mutually nearest neighbors within the threshold count,
/// normalized by min(|a_cov|, |b_cov|). Argmin ties go to the earlier entry.
RepeatabilityScores mutual_nn_repeatability(std::span<const Point> a, std::span<const Point> b,
                                            const Homography& h, Shape shape1, Shape shape2,
                                            const EvalConfig& cfg = {});

/// Fraction of covisible keypoints in both sets having any counterpart
/// within the threshold: (#referenced in a + #referenced in b) / (|a_cov| + |b_cov|).
RepeatabilityScores classic_repeatability(std::span<const Point> a, std::span<const Point> b,
                                          const Homography& h, Shape shape1, Shape shape2,
                                          const EvalConfig& cfg = {});

/// Mutual pairs (index into a, index into b, distance in image 1) ignoring
/// thresholds; exposed for diagnostics.
struct MutualMatch
{
    std::size_t a;
    std::size_t b;
    double distance;
};
std::vector<MutualMatch> mutual_nearest_neighbors(std::span<const Point> a, std::span<const Point> b,
                                                  const Homography& h);

/// Keypoints detected at one scale together with the homography that maps
/// reference-image coordinates into that scale's image.
struct ScaleEntry
{
    std::vector<Point> points; // ranked, best first
    Shape shape;
    Homography from_reference = Homography::identity();
};

struct ScaleScore
{
    double area_fraction;
    RepeatabilityScores scores;
};

struct ScaleProtocol
{
    std::size_t reference_side = 1000;
    std::vector<double> area_fractions{0.75, 0.5, 0.25};
    std::size_t budget = 500;
    EvalConfig eval;
};

/// Side length of the image that keeps roughly `area_fraction` of the
/// reference pixel area: round(sqrt(fraction) * reference_side).
std::size_t scaled_side(std::size_t reference_side, double area_fraction);

/// Scaling homography from the reference square to the reduced one.
Homography scale_homography(std::size_t reference_side, std::size_t side);

/// Mutual-NN repeatability between the reference set and each reduced-scale
/// set, after truncating every set to the budget. Throws ValueError when a
/// fraction in the protocol has no entry.
std::vector<ScaleScore> scale_experiment(const ScaleEntry& reference,
                                         const std::map<double, ScaleEntry>& scaled,
                                         const ScaleProtocol& protocol = {});

void validate(const EvalConfig& cfg);

} // namespace topokey
