#include "topokey/detect.hpp"

#include <algorithm>
#include <unordered_map>

#include "topokey/persistence.hpp"

namespace topokey
{

namespace
{

void validate(const DetectConfig& cfg)
{
    if (cfg.max_keypoints && *cfg.max_keypoints == 0)
        throw ValueError("max_keypoints must be at least 1");
}

// Higher persistence first; equal persistence falls back to score, then to
// the tie-break key.
void rank_keypoints(const HeightMap& map, std::vector<Keypoint>& kps, Ranking ranking)
{
    auto by_key = [&](const Keypoint& a, const Keypoint& b) {
        return tie_break_key(map, b.position) < tie_break_key(map, a.position);
    };
    if (ranking == Ranking::by_score)
    {
        std::sort(kps.begin(), kps.end(), by_key);
        return;
    }
    std::sort(kps.begin(), kps.end(), [&](const Keypoint& a, const Keypoint& b) {
        const double pa = a.persistence.value_or(0.0);
        const double pb = b.persistence.value_or(0.0);
        if (pa != pb)
            return pa > pb;
        return by_key(a, b);
    });
}

} // namespace

void truncate_keypoints(std::vector<Keypoint>& keypoints, std::size_t n)
{
    if (keypoints.size() > n)
        keypoints.resize(n);
}

std::vector<Keypoint> nms_keypoints(const HeightMap& map, const DetectConfig& cfg)
{
    validate(cfg);
    const auto rows = static_cast<std::int32_t>(map.rows());
    const auto cols = static_cast<std::int32_t>(map.cols());

    std::vector<Keypoint> out;
    for (std::int32_t i = 0; i < rows; ++i)
    {
        for (std::int32_t j = 0; j < cols; ++j)
        {
            const Vertex v{i, j};
            const double value = map(v);
            if (!(value > cfg.gamma))
                continue;
            const TieBreakKey key = tie_break_key(map, v);
            bool is_max = true;
            for (std::int32_t di = -1; di <= 1 && is_max; ++di)
            {
                for (std::int32_t dj = -1; dj <= 1; ++dj)
                {
                    const Vertex w{i + di, j + dj};
                    if ((di == 0 && dj == 0) || !map.shape().contains(w))
                        continue;
                    if (!(tie_break_key(map, w) < key) || (cfg.reject_plateaus && map(w) == value))
                    {
                        is_max = false;
                        break;
                    }
                }
            }
            if (is_max)
                out.push_back({v, value, std::nullopt});
        }
    }

    if (cfg.ranking == Ranking::by_persistence)
    {
        std::unordered_map<std::size_t, double> pers;
        for (const auto& g : h1_generators(map))
            pers[map.offset(g.peak())] = g.persistence();
        for (auto& kp : out)
        {
            auto it = pers.find(map.offset(kp.position));
            kp.persistence = it == pers.end() ? 0.0 : it->second;
        }
    }

    rank_keypoints(map, out, cfg.ranking);
    if (cfg.max_keypoints)
        truncate_keypoints(out, *cfg.max_keypoints);
    return out;
}

std::vector<Keypoint> persistence_keypoints(const HeightMap& map, double min_persistence, const DetectConfig& cfg)
{
    validate(cfg);
    if (!(min_persistence >= 0.0))
        throw ValueError("min_persistence must be non-negative");

    std::vector<Keypoint> out;
    for (const auto& g : h1_generators(map))
    {
        if (g.persistence() >= min_persistence && map(g.peak()) > cfg.gamma)
            out.push_back({g.peak(), map(g.peak()), g.persistence()});
    }
    rank_keypoints(map, out, Ranking::by_persistence);
    if (cfg.max_keypoints)
        truncate_keypoints(out, *cfg.max_keypoints);
    return out;
}

} // namespace topokey
