#include "topokey/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace topokey
{

namespace
{

StepStats summarize(std::size_t step, double loss, const std::vector<GeneratorTerm>& terms)
{
    StepStats s;
    s.step = step;
    s.loss = loss;
    s.generators = terms.size();
    if (!terms.empty())
    {
        for (const auto& t : terms)
        {
            s.mean_persistence += t.persistence;
            s.mean_similarity += t.similarity;
        }
        s.mean_persistence /= static_cast<double>(terms.size());
        s.mean_similarity /= static_cast<double>(terms.size());
    }
    return s;
}

HeightMap descend(const HeightMap& map, const Field& grad, double lr, ValueDomain domain)
{
    std::vector<double> v(map.values().begin(), map.values().end());
    for (std::size_t k = 0; k < v.size(); ++k)
    {
        v[k] -= lr * grad[k];
        if (domain == ValueDomain::unit_box)
            v[k] = std::clamp(v[k], 0.0, 1.0);
    }
    return HeightMap(map.shape(), std::move(v));
}

} // namespace

OptimizeResult optimize_pair(const HeightMap& map1, const HeightMap& map2, const CorrespondenceMap& u12,
                             const CorrespondenceMap& u21, const OptimizeConfig& cfg)
{
    if (cfg.steps == 0)
        throw ValueError("steps must be at least 1");
    if (!(cfg.lr > 0.0))
        throw ValueError("learning rate must be positive");

    const LossConfig loss_cfg{cfg.alpha, cfg.keep_zero_persistence};
    OptimizeResult result{{}, map1, map2};

    for (std::size_t step = 0; step <= cfg.steps; ++step)
    {
        LossResult forward = detector_loss(result.map1, result.map2, u12, loss_cfg);
        double loss = forward.loss;
        Field g1 = std::move(forward.grad_map1);
        Field g2 = std::move(forward.grad_map2);
        if (cfg.symmetric)
        {
            const LossResult back = detector_loss(result.map2, result.map1, u21, loss_cfg);
            loss += back.loss;
            for (std::size_t k = 0; k < g1.values().size(); ++k)
                g1[k] += back.grad_map2[k];
            for (std::size_t k = 0; k < g2.values().size(); ++k)
                g2[k] += back.grad_map1[k];
        }

        if (!std::isfinite(loss) || std::abs(loss) > cfg.divergence_limit)
        {
            std::ostringstream msg;
            msg << "optimization diverged at step " << step << " (loss " << loss << ")";
            throw Error(msg.str());
        }
        result.trajectory.push_back(summarize(step, loss, forward.terms));
        if (step == cfg.steps)
            break;

        result.map1 = descend(result.map1, g1, cfg.lr, cfg.domain);
        result.map2 = descend(result.map2, g2, cfg.lr, cfg.domain);
    }
    return result;
}

} // namespace topokey
