#include "topokey/repeatability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace topokey
{

namespace
{

struct Covisible
{
    std::vector<Point> a;        // image 1 coordinates
    std::vector<Point> b;        // image 2 coordinates
    std::vector<Point> a_in_2;   // a projected into image 2
    std::vector<Point> b_in_1;   // b projected into image 1
};

Covisible restrict_covisible(std::span<const Point> a, std::span<const Point> b, const Homography& h,
                             Shape shape1, Shape shape2)
{
    const Homography inv = h.inverse();
    Covisible c;
    for (const auto& p : a)
    {
        if (auto q = h.apply(p); q && inside(*q, shape2))
        {
            c.a.push_back(p);
            c.a_in_2.push_back(*q);
        }
    }
    for (const auto& p : b)
    {
        if (auto q = inv.apply(p); q && inside(*q, shape1))
        {
            c.b.push_back(p);
            c.b_in_1.push_back(*q);
        }
    }
    return c;
}

std::size_t nearest(const Point& query, std::span<const Point> candidates)
{
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < candidates.size(); ++k)
    {
        const double d = distance(query, candidates[k]);
        if (d < best_d)
        {
            best_d = d;
            best = k;
        }
    }
    return best;
}

// Mutual pairs given both sets already expressed in each other's frames.
std::vector<MutualMatch> mutual_pairs(std::span<const Point> a, std::span<const Point> b,
                                      std::span<const Point> a_in_2, std::span<const Point> b_in_1)
{
    std::vector<MutualMatch> out;
    if (a.empty() || b.empty())
        return out;
    std::vector<std::size_t> nn_of_b(b.size());
    for (std::size_t j = 0; j < b.size(); ++j)
        nn_of_b[j] = nearest(b[j], a_in_2);
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        const std::size_t j = nearest(a[i], b_in_1);
        if (nn_of_b[j] == i)
            out.push_back({i, j, distance(a[i], b_in_1[j])});
    }
    return out;
}

RepeatabilityScores empty_scores(const EvalConfig& cfg, const Covisible& c)
{
    RepeatabilityScores s;
    s.thresholds = cfg.thresholds;
    s.scores.assign(cfg.thresholds.size(), 0.0);
    s.covisible_a = c.a.size();
    s.covisible_b = c.b.size();
    return s;
}

void finish_mean(RepeatabilityScores& s)
{
    double sum = 0.0;
    for (double v : s.scores)
        sum += v;
    s.mean = s.scores.empty() ? 0.0 : sum / static_cast<double>(s.scores.size());
}

} // namespace

void validate(const EvalConfig& cfg)
{
    if (cfg.thresholds.empty())
        throw ValueError("at least one distance threshold is required");
    for (std::size_t k = 0; k < cfg.thresholds.size(); ++k)
    {
        if (!(cfg.thresholds[k] > 0.0) || !std::isfinite(cfg.thresholds[k]))
            throw ValueError("distance thresholds must be positive and finite");
        if (k > 0 && !(cfg.thresholds[k] > cfg.thresholds[k - 1]))
            throw ValueError("distance thresholds must be strictly ascending");
    }
}

std::vector<MutualMatch> mutual_nearest_neighbors(std::span<const Point> a, std::span<const Point> b,
                                                  const Homography& h)
{
    const Homography inv = h.inverse();
    std::vector<Point> a_in_2, b_in_1;
    for (const auto& p : a)
    {
        auto q = h.apply(p);
        a_in_2.push_back(q.value_or(Point{std::numeric_limits<double>::infinity(),
                                          std::numeric_limits<double>::infinity()}));
    }
    for (const auto& p : b)
    {
        auto q = inv.apply(p);
        b_in_1.push_back(q.value_or(Point{std::numeric_limits<double>::infinity(),
                                          std::numeric_limits<double>::infinity()}));
    }
    return mutual_pairs(a, b, a_in_2, b_in_1);
}

RepeatabilityScores mutual_nn_repeatability(std::span<const Point> a, std::span<const Point> b,
                                            const Homography& h, Shape shape1, Shape shape2,
                                            const EvalConfig& cfg)
{
    validate(cfg);
    const Covisible c = restrict_covisible(a, b, h, shape1, shape2);
    RepeatabilityScores s = empty_scores(cfg, c);
    if (c.a.empty() || c.b.empty())
        return s;

    const auto matches = mutual_pairs(c.a, c.b, c.a_in_2, c.b_in_1);
    const double denom = static_cast<double>(std::min(c.a.size(), c.b.size()));
    for (std::size_t t = 0; t < cfg.thresholds.size(); ++t)
    {
        const auto n = std::count_if(matches.begin(), matches.end(),
                                     [&](const MutualMatch& m) { return m.distance <= cfg.thresholds[t]; });
        s.scores[t] = static_cast<double>(n) / denom;
    }
    finish_mean(s);
    return s;
}

RepeatabilityScores classic_repeatability(std::span<const Point> a, std::span<const Point> b,
                                          const Homography& h, Shape shape1, Shape shape2,
                                          const EvalConfig& cfg)
{
    validate(cfg);
    const Covisible c = restrict_covisible(a, b, h, shape1, shape2);
    RepeatabilityScores s = empty_scores(cfg, c);
    if (c.a.empty() || c.b.empty())
        return s;

    std::vector<double> nearest_a(c.a.size()), nearest_b(c.b.size());
    for (std::size_t i = 0; i < c.a.size(); ++i)
        nearest_a[i] = distance(c.a[i], c.b_in_1[nearest(c.a[i], c.b_in_1)]);
    for (std::size_t j = 0; j < c.b.size(); ++j)
        nearest_b[j] = distance(c.b[j], c.a_in_2[nearest(c.b[j], c.a_in_2)]);

    const double denom = static_cast<double>(c.a.size() + c.b.size());
    for (std::size_t t = 0; t < cfg.thresholds.size(); ++t)
    {
        const double eps = cfg.thresholds[t];
        auto within = [eps](double d) { return d <= eps; };
        const auto n = std::count_if(nearest_a.begin(), nearest_a.end(), within)
                       + std::count_if(nearest_b.begin(), nearest_b.end(), within);
        s.scores[t] = static_cast<double>(n) / denom;
    }
    finish_mean(s);
    return s;
}

std::size_t scaled_side(std::size_t reference_side, double area_fraction)
{
    if (!(area_fraction > 0.0) || area_fraction > 1.0)
        throw ValueError("area fraction must lie in (0, 1]");
    return static_cast<std::size_t>(std::lround(std::sqrt(area_fraction) * static_cast<double>(reference_side)));
}

Homography scale_homography(std::size_t reference_side, std::size_t side)
{
    const double s = static_cast<double>(side) / static_cast<double>(reference_side);
    return Homography::scaling(s, s);
}

std::vector<ScaleScore> scale_experiment(const ScaleEntry& reference, const std::map<double, ScaleEntry>& scaled,
                                         const ScaleProtocol& protocol)
{
    validate(protocol.eval);
    if (protocol.budget == 0)
        throw ValueError("keypoint budget must be at least 1");

    auto budgeted = [&](const std::vector<Point>& pts) {
        const std::size_t n = std::min(pts.size(), protocol.budget);
        return std::vector<Point>(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(n));
    };
    const auto ref = budgeted(reference.points);

    std::vector<ScaleScore> out;
    for (double fraction : protocol.area_fractions)
    {
        auto it = scaled.find(fraction);
        if (it == scaled.end())
            throw ValueError("missing keypoints for area fraction " + std::to_string(fraction));
        const auto pts = budgeted(it->second.points);
        out.push_back({fraction, mutual_nn_repeatability(ref, pts, it->second.from_reference, reference.shape,
                                                         it->second.shape, protocol.eval)});
    }
    return out;
}

} // namespace topokey
