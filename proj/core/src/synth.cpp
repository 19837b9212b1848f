#include "topokey/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace topokey
{

HeightMap gaussian_bumps(std::size_t size, std::size_t n_blobs, Rng& rng)
{
    const double n = static_cast<double>(size);
    std::uniform_real_distribution<double> center(2.0, n - 3.0);
    std::uniform_real_distribution<double> width(1.5, std::max(2.0, n / 10.0));
    std::uniform_real_distribution<double> height(0.4, 1.0);

    std::vector<double> values(size * size, 0.0);
    for (std::size_t b = 0; b < n_blobs; ++b)
    {
        const double cy = center(rng);
        const double cx = center(rng);
        const double sigma = width(rng);
        const double amp = height(rng);
        const double inv = 1.0 / (2.0 * sigma * sigma);
        for (std::size_t i = 0; i < size; ++i)
        {
            for (std::size_t j = 0; j < size; ++j)
            {
                const double dy = static_cast<double>(i) - cy;
                const double dx = static_cast<double>(j) - cx;
                values[i * size + j] += amp * std::exp(-(dx * dx + dy * dy) * inv);
            }
        }
    }
    return HeightMap(size, size, std::move(values));
}

Homography random_warp(WarpFamily family, std::size_t size, Rng& rng)
{
    if (family == WarpFamily::none)
        return Homography::identity();

    const double n = static_cast<double>(size);
    const double c = (n - 1.0) / 2.0;
    std::uniform_real_distribution<double> angle(-15.0 * std::numbers::pi / 180.0, 15.0 * std::numbers::pi / 180.0);
    std::uniform_real_distribution<double> scale(0.85, 1.15);
    std::uniform_real_distribution<double> shift(-n / 10.0, n / 10.0);

    const double a = angle(rng);
    const double s = scale(rng);
    const double tx = shift(rng);
    const double ty = shift(rng);
    // Rotate and scale about the image center, then translate.
    const Homography similarity = Homography::translation(c + tx, c + ty)
                                  * Homography({s * std::cos(a), -s * std::sin(a), 0, s * std::sin(a), s * std::cos(a), 0, 0, 0, 1})
                                  * Homography::translation(-c, -c);
    if (family == WarpFamily::similarity)
        return similarity;

    std::uniform_real_distribution<double> perspective(-0.1 / n, 0.1 / n);
    const double px = perspective(rng);
    const double py = perspective(rng);
    // Perspective about the center keeps the middle of the image fixed.
    return similarity * Homography::translation(c, c) * Homography({1, 0, 0, 0, 1, 0, px, py, 1})
           * Homography::translation(-c, -c);
}

HeightMap warp_map(const HeightMap& source, const Homography& h, Shape target, double fill)
{
    const Homography inv = h.inverse();
    std::vector<double> out(target.size(), fill);
    const double max_x = static_cast<double>(source.cols() - 1);
    const double max_y = static_cast<double>(source.rows() - 1);
    for (std::size_t i = 0; i < target.rows; ++i)
    {
        for (std::size_t j = 0; j < target.cols; ++j)
        {
            const auto p = inv.apply({static_cast<double>(j), static_cast<double>(i)});
            if (!p || p->x < 0.0 || p->y < 0.0 || p->x > max_x || p->y > max_y)
                continue;
            const auto x0 = static_cast<std::size_t>(std::floor(p->x));
            const auto y0 = static_cast<std::size_t>(std::floor(p->y));
            const std::size_t x1 = std::min(x0 + 1, source.cols() - 1);
            const std::size_t y1 = std::min(y0 + 1, source.rows() - 1);
            const double fx = p->x - static_cast<double>(x0);
            const double fy = p->y - static_cast<double>(y0);
            const double top = source(y0, x0) * (1.0 - fx) + source(y0, x1) * fx;
            const double bottom = source(y1, x0) * (1.0 - fx) + source(y1, x1) * fx;
            out[i * target.cols + j] = top * (1.0 - fy) + bottom * fy;
        }
    }
    return HeightMap(target, std::move(out));
}

SynthPair synth_pair(const SynthConfig& cfg)
{
    if (cfg.size < 16)
        throw ValueError("synthetic maps need size >= 16");
    if (cfg.n_blobs == 0)
        throw ValueError("synthetic maps need at least one blob");
    if (!(cfg.noise >= 0.0))
        throw ValueError("noise must be non-negative");

    Rng rng(cfg.seed);
    HeightMap first = gaussian_bumps(cfg.size, cfg.n_blobs, rng);
    const Homography warp = random_warp(cfg.warp, cfg.size, rng);
    HeightMap second = warp_map(first, warp, first.shape());
    if (cfg.noise > 0.0)
    {
        std::normal_distribution<double> noise(0.0, cfg.noise);
        std::vector<double> v(second.values().begin(), second.values().end());
        for (double& x : v)
            x += noise(rng);
        second = HeightMap(second.shape(), std::move(v));
    }
    return {std::move(first), std::move(second), warp};
}

HeightMap random_uniform_map(Shape shape, Rng& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> v(shape.size());
    for (double& x : v)
        x = unit(rng);
    return HeightMap(shape, std::move(v));
}

HeightMap random_distinct_map(Shape shape, Rng& rng)
{
    const std::size_t n = shape.size();
    std::vector<std::size_t> level(n);
    std::iota(level.begin(), level.end(), std::size_t{0});
    std::shuffle(level.begin(), level.end(), rng);
    std::uniform_real_distribution<double> jitter(0.0, 0.5);
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k)
        v[k] = (static_cast<double>(level[k]) + jitter(rng)) / static_cast<double>(n);
    return HeightMap(shape, std::move(v));
}

} // namespace topokey
