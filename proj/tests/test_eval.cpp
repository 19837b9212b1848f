#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "topokey/geometry.hpp"
#include "topokey/repeatability.hpp"

using namespace topokey;

namespace
{

const Shape kShape{64, 64};

EvalConfig eps(std::vector<double> t)
{
    return {std::move(t)};
}

std::vector<Point> random_points(std::size_t n, Rng& rng, double lo = 0.0, double hi = 63.0)
{
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<Point> pts(n);
    for (auto& p : pts)
        p = {std::round(u(rng)), std::round(u(rng))};
    return pts;
}

// Exhaustive reference: every pair (i, j) checked for mutual nearest-neighbor
// status, with ties resolved to the earlier index. The neighbor of a point of
// `a` is searched in image 1, the neighbor of a point of `b` in image 2.
double brute_mutual(const std::vector<Point>& a, const std::vector<Point>& b, const Homography& h, double e)
{
    const Homography inv = h.inverse();
    std::vector<Point> ac, afwd, bc, bback;
    for (const auto& p : a)
        if (auto q = h.apply(p); q && inside(*q, kShape))
        {
            ac.push_back(p);
            afwd.push_back(*q);
        }
    for (const auto& p : b)
        if (auto q = inv.apply(p); q && inside(*q, kShape))
        {
            bc.push_back(p);
            bback.push_back(*q);
        }
    if (ac.empty() || bc.empty())
        return 0.0;
    std::size_t matches = 0;
    for (std::size_t i = 0; i < ac.size(); ++i)
        for (std::size_t j = 0; j < bc.size(); ++j)
        {
            const double d = distance(ac[i], bback[j]);
            bool best_for_i = true, best_for_j = true;
            for (std::size_t k = 0; k < bc.size(); ++k)
            {
                const double dk = distance(ac[i], bback[k]);
                best_for_i = best_for_i && (dk > d || (dk == d && k >= j));
            }
            for (std::size_t k = 0; k < ac.size(); ++k)
            {
                const double dk = distance(afwd[k], bc[j]);
                const double di = distance(afwd[i], bc[j]);
                best_for_j = best_for_j && (dk > di || (dk == di && k >= i));
            }
            matches += best_for_i && best_for_j && d <= e;
        }
    return static_cast<double>(matches) / static_cast<double>(std::min(ac.size(), bc.size()));
}

} // namespace

TEST_CASE("warping points")
{
    const std::vector<Point> pts{{3, 4}, {0, 0}, {10.5, -2}};
    for (std::size_t k = 0; k < pts.size(); ++k)
    {
        CHECK(*warp_points(pts, Homography::identity())[k] == pts[k]);
        const auto t = *warp_points(pts, Homography::translation(2, -3))[k];
        CHECK(t.x == pts[k].x + 2);
        CHECK(t.y == pts[k].y - 3);
    }
    CHECK(*Homography::scaling(2, 2).apply({3, 4}) == Point{6, 8});
    CHECK_FALSE(Homography({1, 0, 0, 0, 1, 0, 1, 0, 1}).apply({-1, 5}).has_value());
    CHECK_THROWS_AS(Homography({1, 2, 3, 2, 4, 6, 0, 0, 1}), ValueError);
    const Homography h({1.1, 0.1, 3, -0.2, 0.9, 1, 1e-3, 2e-3, 1});
    const auto back = (h.inverse() * h).apply({5, 7});
    CHECK(back->x == doctest::Approx(5));
    CHECK(back->y == doctest::Approx(7));
}

TEST_CASE("correspondence maps from homographies")
{
    const auto id = build_correspondence_map({5, 6}, {5, 6}, Homography::identity());
    CHECK(id == CorrespondenceMap::identity({5, 6}));
    CHECK(id.defined_count() == 30);

    CHECK(build_correspondence_map({5, 6}, {5, 6}, Homography::translation(6, 0)).defined_count() == 0);
    CHECK(build_correspondence_map({5, 6}, {5, 6}, Homography::translation(0.4, 0)) == id);

    const auto half = build_correspondence_map({4, 4}, {4, 4}, Homography::translation(0.5, 0));
    CHECK(half(Vertex{0, 0}) == Vertex{0, 1});
    CHECK_FALSE(half(Vertex{0, 3}).has_value());

    const auto mixed = build_correspondence_map({5, 8}, {7, 4}, Homography::identity());
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 8; ++j)
        {
            if (j < 4)
                CHECK(mixed(Vertex{i, j}) == Vertex{i, j});
            else
                CHECK_FALSE(mixed(Vertex{i, j}).has_value());
        }
}

TEST_CASE("mutual nearest-neighbor repeatability")
{
    const auto h = Homography::identity();
    Rng rng(1);
    const auto a = random_points(30, rng);
    CHECK(mutual_nn_repeatability(a, a, h, kShape, kShape, eps({0.5, 1, 3})).mean == 1.0);

    const std::vector<Point> p0{{0, 0}}, p10{{10, 10}};
    CHECK(mutual_nn_repeatability(p0, p10, h, kShape, kShape, eps({5})).scores[0] == 0.0);

    const std::vector<Point> a2{{0, 0}, {5, 5}}, b2{{0, 1}, {9, 9}};
    CHECK(mutual_nn_repeatability(a2, b2, h, kShape, kShape, eps({2})).scores[0] == 0.5);

    CHECK(mutual_nn_repeatability({}, a, h, kShape, kShape).mean == 0.0);
}

TEST_CASE("classic repeatability")
{
    const auto h = Homography::identity();
    Rng rng(2);
    const auto a = random_points(25, rng);
    CHECK(classic_repeatability(a, a, h, kShape, kShape).mean == 1.0);

    const std::vector<Point> x{{10, 10}}, y{{13, 10}};
    CHECK(classic_repeatability(x, y, h, kShape, kShape, eps({5})).scores[0] == 1.0);
    CHECK(classic_repeatability(x, y, h, kShape, kShape, eps({2})).scores[0] == 0.0);
}

TEST_CASE("cluster inflation")
{
    const auto h = Homography::identity();
    const Point p{20, 20};
    const std::vector<Point> single{p};
    const std::vector<Point> cluster{p, {p.x + 1, p.y}, {p.x, p.y + 1}};
    CHECK(classic_repeatability(single, cluster, h, kShape, kShape, eps({2})).scores[0] == 1.0);
    CHECK(mutual_nn_repeatability(single, cluster, h, kShape, kShape, eps({2})).scores[0] == 1.0);
    CHECK(mutual_nearest_neighbors(single, cluster, h).size() == 1);

    // Three detections stacked on one feature against one hit and two misses.
    const std::vector<Point> stacked = cluster;
    const std::vector<Point> other{p, {50, 50}, {5, 50}};
    const double classic = classic_repeatability(stacked, other, h, kShape, kShape, eps({2})).scores[0];
    const double mutual = mutual_nn_repeatability(stacked, other, h, kShape, kShape, eps({2})).scores[0];
    CHECK(classic == doctest::Approx(4.0 / 6.0));
    CHECK(mutual == doctest::Approx(1.0 / 3.0));
    CHECK(classic > mutual);
}

TEST_CASE("mutual repeatability matches exhaustive enumeration")
{
    Rng rng(3);
    std::uniform_int_distribution<std::size_t> count(0, 20);
    const Homography h({1.05, 0.02, 2.0, -0.03, 0.97, -1.0, 1e-4, -2e-4, 1.0});
    const double c = std::cos(0.1), s = std::sin(0.1);
    const Homography rigid({c, -s, 3.0, s, c, -2.0, 0, 0, 1});
    for (int k = 0; k < 100; ++k)
    {
        const auto a = random_points(count(rng), rng, -3, 66);
        const auto b = random_points(count(rng), rng, -3, 66);
        const auto cfg = eps({0.5, 1, 2, 3, 4, 5, 8});
        const auto r = mutual_nn_repeatability(a, b, h, kShape, kShape, cfg);
        double prev = 0.0;
        for (std::size_t t = 0; t < cfg.thresholds.size(); ++t)
        {
            CHECK(r.scores[t] == doctest::Approx(brute_mutual(a, b, h, cfg.thresholds[t])));
            CHECK(r.scores[t] >= prev);
            CHECK(r.scores[t] <= 1.0);
            prev = r.scores[t];
        }
        const auto forward = mutual_nn_repeatability(a, b, rigid, kShape, kShape, cfg);
        const auto reverse = mutual_nn_repeatability(b, a, rigid.inverse(), kShape, kShape, cfg);
        for (std::size_t t = 0; t < cfg.thresholds.size(); ++t)
            CHECK(reverse.scores[t] == doctest::Approx(forward.scores[t]));

        std::vector<int> used_a(a.size()), used_b(b.size());
        for (const auto& m : mutual_nearest_neighbors(a, b, h))
        {
            CHECK(++used_a[m.a] == 1);
            CHECK(++used_b[m.b] == 1);
        }
    }
}

TEST_CASE("scale protocol")
{
    CHECK(scaled_side(1000, 0.75) == 866);
    CHECK(scaled_side(1000, 0.5) == 707);
    CHECK(scaled_side(1000, 0.25) == 500);

    Rng rng(4);
    std::uniform_real_distribution<double> u(0.0, 999.0);
    ScaleEntry ref{{}, {1000, 1000}};
    for (int k = 0; k < 700; ++k)
        ref.points.push_back({std::round(u(rng)), std::round(u(rng))});

    std::map<double, ScaleEntry> scaled;
    for (double f : {0.75, 0.5, 0.25})
    {
        const std::size_t side = scaled_side(1000, f);
        const auto h = scale_homography(1000, side);
        ScaleEntry e{{}, {side, side}, h};
        for (const auto& p : ref.points)
            e.points.push_back(*h.apply(p));
        scaled.emplace(f, e);
    }
    for (const auto& s : scale_experiment(ref, scaled))
    {
        CHECK(s.scores.mean == 1.0);
        CHECK(s.scores.covisible_a == 500);
    }

    scaled[0.5].points.clear();
    const auto with_empty = scale_experiment(ref, scaled);
    for (const auto& s : with_empty)
        CHECK(s.scores.mean == (s.area_fraction == 0.5 ? 0.0 : 1.0));

    scaled.erase(0.25);
    CHECK_THROWS_AS(scale_experiment(ref, scaled), ValueError);
}

TEST_CASE("eval config validation")
{
    CHECK_NOTHROW(validate(EvalConfig{}));
    CHECK_THROWS_AS(validate(eps({2, 1})), ValueError);
    CHECK_THROWS_AS(validate(eps({0, 1})), ValueError);
    CHECK_THROWS_AS(validate(eps({})), ValueError);
}
