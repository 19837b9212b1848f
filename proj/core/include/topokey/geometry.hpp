#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "topokey/height_map.hpp"
#include "topokey/loss.hpp"

namespace topokey
{

/// Image-plane point: x is the column, y is the row.
struct Point
{
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline Point to_point(Vertex v)
{
    return {static_cast<double>(v.col), static_cast<double>(v.row)};
}

double distance(const Point& a, const Point& b);

/// Nonsingular 3x3 projective transform acting on (x, y, 1), row-major.
class Homography
{
public:
    /// Throws ValueError if the matrix is singular or non-finite.
    explicit Homography(const std::array<double, 9>& m);

    static Homography identity();
    static Homography translation(double tx, double ty);
    static Homography scaling(double sx, double sy);

    const std::array<double, 9>& matrix() const { return m_; }
    double operator()(std::size_t r, std::size_t c) const { return m_[r * 3 + c]; }
    double determinant() const;
    Homography inverse() const;

    /// nullopt when the homogeneous coordinate vanishes (|w| < 1e-12).
    std::optional<Point> apply(const Point& p) const;

    friend Homography operator*(const Homography& a, const Homography& b);

private:
    std::array<double, 9> m_;
};

std::vector<std::optional<Point>> warp_points(std::span<const Point> points, const Homography& h);

/// Projects every source pixel through h and rounds to the nearest pixel
/// (halves away from zero); defined iff the result lies inside `target`.
CorrespondenceMap build_correspondence_map(Shape source, Shape target, const Homography& h);

/// Continuous inside test on the pixel-center lattice: 0 <= x <= cols-1,
/// 0 <= y <= rows-1.
bool inside(const Point& p, Shape shape);

} // namespace topokey
