#pragma once

#include <cstdint>
#include <random>

#include "topokey/geometry.hpp"
#include "topokey/height_map.hpp"

namespace topokey
{

/// Every random draw in the project goes through this engine.
using Rng = std::mt19937_64;
inline constexpr const char* kRngName = "std::mt19937_64";

enum class WarpFamily
{
    none,
    similarity,
    homography,
};

struct SynthConfig
{
    std::uint64_t seed = 0;
    std::size_t size = 64;
    std::size_t n_blobs = 8;
    WarpFamily warp = WarpFamily::homography;
    double noise = 0.0; // standard deviation of additive Gaussian noise on the second map
};

struct SynthPair
{
    HeightMap first;
    HeightMap second;
    Homography warp; // maps first-map pixel coordinates to second-map coordinates
};

/// Sum of Gaussian bumps with random interior centers, widths and heights on
/// a zero background. Throws ValueError for size < 16 or n_blobs == 0.
SynthPair synth_pair(const SynthConfig& cfg);

HeightMap gaussian_bumps(std::size_t size, std::size_t n_blobs, Rng& rng);

Homography random_warp(WarpFamily family, std::size_t size, Rng& rng);

/// target(p) = source(h^-1(p)) with bilinear sampling; `fill` outside.
HeightMap warp_map(const HeightMap& source, const Homography& h, Shape target, double fill = 0.0);

/// Independent uniform values in [0, 1).
HeightMap random_uniform_map(Shape shape, Rng& rng);

/// Distinct values in [0, 1): a random permutation of the n = rows*cols
/// levels k/n, each jittered by less than 1/(2n). Adjacent values differ by
/// at least 1/(2n).
HeightMap random_distinct_map(Shape shape, Rng& rng);

} // namespace topokey
