#include "topokey/geometry.hpp"

#include <cmath>

namespace topokey
{

double distance(const Point& a, const Point& b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

Homography::Homography(const std::array<double, 9>& m)
    : m_(m)
{
    for (double v : m_)
        if (!std::isfinite(v))
            throw ValueError("homography has non-finite entries");
    if (determinant() == 0.0)
        throw ValueError("homography is singular");
}

Homography Homography::identity()
{
    return Homography({1, 0, 0, 0, 1, 0, 0, 0, 1});
}

Homography Homography::translation(double tx, double ty)
{
    return Homography({1, 0, tx, 0, 1, ty, 0, 0, 1});
}

Homography Homography::scaling(double sx, double sy)
{
    return Homography({sx, 0, 0, 0, sy, 0, 0, 0, 1});
}

double Homography::determinant() const
{
    const auto& a = m_;
    return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6])
           + a[2] * (a[3] * a[7] - a[4] * a[6]);
}

Homography Homography::inverse() const
{
    const auto& a = m_;
    const double det = determinant();
    std::array<double, 9> inv{
        a[4] * a[8] - a[5] * a[7], a[2] * a[7] - a[1] * a[8], a[1] * a[5] - a[2] * a[4],
        a[5] * a[6] - a[3] * a[8], a[0] * a[8] - a[2] * a[6], a[2] * a[3] - a[0] * a[5],
        a[3] * a[7] - a[4] * a[6], a[1] * a[6] - a[0] * a[7], a[0] * a[4] - a[1] * a[3],
    };
    for (double& v : inv)
        v /= det;
    return Homography(inv);
}

std::optional<Point> Homography::apply(const Point& p) const
{
    const auto& a = m_;
    const double w = a[6] * p.x + a[7] * p.y + a[8];
    if (std::abs(w) < 1e-12)
        return std::nullopt;
    return Point{(a[0] * p.x + a[1] * p.y + a[2]) / w, (a[3] * p.x + a[4] * p.y + a[5]) / w};
}

Homography operator*(const Homography& a, const Homography& b)
{
    std::array<double, 9> c{};
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t k = 0; k < 3; ++k)
            for (std::size_t j = 0; j < 3; ++j)
                c[r * 3 + k] += a(r, j) * b(j, k);
    return Homography(c);
}

std::vector<std::optional<Point>> warp_points(std::span<const Point> points, const Homography& h)
{
    std::vector<std::optional<Point>> out;
    out.reserve(points.size());
    for (const auto& p : points)
        out.push_back(h.apply(p));
    return out;
}

bool inside(const Point& p, Shape shape)
{
    return p.x >= 0.0 && p.y >= 0.0 && p.x <= static_cast<double>(shape.cols) - 1.0
           && p.y <= static_cast<double>(shape.rows) - 1.0;
}

CorrespondenceMap build_correspondence_map(Shape source, Shape target, const Homography& h)
{
    CorrespondenceMap u(source, target);
    for (std::size_t i = 0; i < source.rows; ++i)
    {
        for (std::size_t j = 0; j < source.cols; ++j)
        {
            const Vertex from{static_cast<std::int32_t>(i), static_cast<std::int32_t>(j)};
            const auto q = h.apply(to_point(from));
            if (!q)
                continue;
            const double col = std::round(q->x);
            const double row = std::round(q->y);
            if (row < 0.0 || col < 0.0 || row >= static_cast<double>(target.rows)
                || col >= static_cast<double>(target.cols))
                continue;
            u.set(from, Vertex{static_cast<std::int32_t>(row), static_cast<std::int32_t>(col)});
        }
    }
    return u;
}

} // namespace topokey
