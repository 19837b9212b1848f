#include "topokey/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "topokey/synth.hpp"

namespace topokey
{

namespace
{

HeightMap nudged(const HeightMap& map, Vertex v, double delta)
{
    std::vector<double> values(map.values().begin(), map.values().end());
    values[map.offset(v)] += delta;
    return HeightMap(map.shape(), std::move(values));
}

bool has_ties(const HeightMap& map)
{
    std::vector<double> v(map.values().begin(), map.values().end());
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) != v.end();
}

} // namespace

GradcheckReport gradcheck(const HeightMap& map1, const HeightMap& map2, const CorrespondenceMap& u12,
                          const std::optional<CorrespondenceMap>& u21, const GradcheckConfig& cfg)
{
    if (cfg.symmetric && !u21)
        throw ValueError("symmetric gradcheck needs the reverse correspondence");
    if (!(cfg.step > 0.0))
        throw ValueError("finite-difference step must be positive");

    auto forward = [&](const HeightMap& a, const HeightMap& b) {
        if (cfg.symmetric)
            return symmetrized_loss(a, b, u12, *u21, cfg.loss).loss;
        return detector_loss_forward(a, b, u12, cfg.loss).loss;
    };

    const LossResult analytic = cfg.symmetric ? symmetrized_loss(map1, map2, u12, *u21, cfg.loss)
                                              : detector_loss(map1, map2, u12, cfg.loss);

    GradcheckReport report;
    report.min_gap = min_value_gap(map1);
    report.has_ties = has_ties(map1);
    if (cfg.symmetric)
    {
        report.min_gap = std::min(report.min_gap, min_value_gap(map2));
        report.has_ties = report.has_ties || has_ties(map2);
    }
    report.step_within_stratum = !report.has_ties && cfg.step < report.min_gap / 3.0;

    // Positions to probe, per map: every critical vertex, then random ones.
    std::set<std::pair<int, Vertex>> probes;
    std::set<std::pair<int, Vertex>> critical;
    const auto zero = cfg.loss.keep_zero_persistence ? ZeroPersistence::keep : ZeroPersistence::exclude;
    auto add_critical = [&](const HeightMap& source, const CorrespondenceMap& u, int own, int other) {
        for (const auto& p : h1_generators(source, zero))
        {
            for (Vertex v : {p.saddle(), p.peak()})
            {
                critical.insert({own, v});
                if (auto t = u(v))
                    critical.insert({other, *t});
            }
        }
    };
    add_critical(map1, u12, 1, 2);
    if (cfg.symmetric)
        add_critical(map2, *u21, 2, 1);
    probes = critical;

    Rng rng(cfg.seed);
    for (int which : {1, 2})
    {
        const Shape shape = which == 1 ? map1.shape() : map2.shape();
        std::uniform_int_distribution<std::int32_t> row(0, static_cast<std::int32_t>(shape.rows) - 1);
        std::uniform_int_distribution<std::int32_t> col(0, static_cast<std::int32_t>(shape.cols) - 1);
        for (std::size_t k = 0; k < cfg.random_samples; ++k)
        {
            const Vertex v{row(rng), col(rng)};
            probes.insert({which, v});
        }
    }

    report.passed = true;
    for (const auto& [which, v] : probes)
    {
        GradcheckEntry e;
        e.map = which;
        e.position = v;
        e.critical = critical.count({which, v}) > 0;
        if (which == 1)
        {
            e.analytic = analytic.grad_map1(v);
            e.numeric = (forward(nudged(map1, v, cfg.step), map2) - forward(nudged(map1, v, -cfg.step), map2))
                        / (2.0 * cfg.step);
        }
        else
        {
            e.analytic = analytic.grad_map2(v);
            e.numeric = (forward(map1, nudged(map2, v, cfg.step)) - forward(map1, nudged(map2, v, -cfg.step)))
                        / (2.0 * cfg.step);
        }

        if (e.analytic == 0.0)
        {
            e.error = std::abs(e.numeric);
            e.ok = e.error < cfg.absolute_tolerance;
            report.max_absolute_error_at_zero = std::max(report.max_absolute_error_at_zero, e.error);
        }
        else
        {
            e.error = std::abs(e.analytic - e.numeric) / std::max(std::abs(e.analytic), std::abs(e.numeric));
            e.ok = e.error < cfg.relative_tolerance;
            report.max_relative_error = std::max(report.max_relative_error, e.error);
        }
        report.passed = report.passed && e.ok;
        report.entries.push_back(e);
    }
    return report;
}

} // namespace topokey
