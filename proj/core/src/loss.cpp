#include "topokey/loss.hpp"

#include <stdexcept>
#include <tuple>

namespace topokey
{

CorrespondenceMap::CorrespondenceMap(Shape source, Shape target)
    : source_(source)
    , target_(target)
    , target_offset_(source.size(), -1)
{
}

CorrespondenceMap CorrespondenceMap::identity(Shape shape)
{
    CorrespondenceMap u(shape, shape);
    for (std::size_t k = 0; k < shape.size(); ++k)
        u.target_offset_[k] = static_cast<std::int64_t>(k);
    return u;
}

void CorrespondenceMap::set(Vertex from, std::optional<Vertex> to)
{
    if (!source_.contains(from))
        throw std::out_of_range("correspondence source outside its grid");
    const auto k = static_cast<std::size_t>(from.row) * source_.cols + static_cast<std::size_t>(from.col);
    if (!to)
    {
        target_offset_[k] = -1;
        return;
    }
    if (!target_.contains(*to))
        throw std::out_of_range("correspondence target outside its grid");
    target_offset_[k] = static_cast<std::int64_t>(to->row) * static_cast<std::int64_t>(target_.cols) + to->col;
}

std::optional<Vertex> CorrespondenceMap::operator()(Vertex from) const
{
    const auto k = static_cast<std::size_t>(from.row) * source_.cols + static_cast<std::size_t>(from.col);
    const std::int64_t t = target_offset_.at(k);
    if (t < 0)
        return std::nullopt;
    const auto cols = static_cast<std::int64_t>(target_.cols);
    return Vertex{static_cast<std::int32_t>(t / cols), static_cast<std::int32_t>(t % cols)};
}

std::size_t CorrespondenceMap::defined_count() const
{
    std::size_t n = 0;
    for (auto t : target_offset_)
        n += t >= 0 ? 1 : 0;
    return n;
}

namespace
{

void check_shapes(const HeightMap& map1, const HeightMap& map2, const CorrespondenceMap& u)
{
    if (u.source() != map1.shape() || u.target() != map2.shape())
        throw ShapeError("correspondence map shape does not match the height maps");
}

void check_config(const LossConfig& cfg)
{
    if (!(cfg.alpha >= 0.0))
        throw ValueError("alpha must be non-negative");
}

struct Critical
{
    PersistencePair pair;
    double error_saddle;
    double error_peak;
};

std::vector<Critical> critical_terms(const HeightMap& map1, const HeightMap& map2, const CorrespondenceMap& u,
                                     const LossConfig& cfg)
{
    check_shapes(map1, map2, u);
    check_config(cfg);
    const auto zero = cfg.keep_zero_persistence ? ZeroPersistence::keep : ZeroPersistence::exclude;
    std::vector<Critical> out;
    for (const auto& p : h1_generators(map1, zero))
        out.push_back({p, error_at(map1, map2, u, p.saddle()), error_at(map1, map2, u, p.peak())});
    return out;
}

void fill_forward(LossResult& result, const std::vector<Critical>& critical, double alpha)
{
    double total = 0.0;
    for (const auto& c : critical)
    {
        const double pers = c.pair.persistence();
        const double sim = c.error_saddle * c.error_saddle + c.error_peak * c.error_peak;
        result.terms.push_back({c.pair.saddle(), c.pair.peak(), pers, sim});
        total += pers * (pers - alpha * sim);
    }
    result.loss = -total;
}

std::pair<Field, Field> gradients(const HeightMap& map1, const HeightMap& map2, const CorrespondenceMap& u,
                                  const std::vector<Critical>& critical, double alpha)
{
    Field g1(map1.shape());
    Field g2(map2.shape());
    for (const auto& c : critical)
    {
        const double pers = c.pair.persistence();
        const double es = c.error_saddle;
        const double em = c.error_peak;
        const double sim = es * es + em * em;
        g1(c.pair.peak()) += -2.0 * pers + alpha * sim + 2.0 * alpha * pers * em;
        g1(c.pair.saddle()) += 2.0 * pers - alpha * sim + 2.0 * alpha * pers * es;
        if (auto t = u(c.pair.peak()))
            g2(*t) += -2.0 * alpha * pers * em;
        if (auto t = u(c.pair.saddle()))
            g2(*t) += -2.0 * alpha * pers * es;
    }
    return {std::move(g1), std::move(g2)};
}

} // namespace

double error_at(const HeightMap& map1, const HeightMap& map2, const CorrespondenceMap& u, Vertex pos)
{
    if (!map1.shape().contains(pos))
        throw std::out_of_range("error_at: position outside the first map");
    const auto target = u(pos);
    if (!target)
        return 0.0;
    return map1(pos) - map2.at(*target);
}

LossResult detector_loss_forward(const HeightMap& map1, const HeightMap& map2, const CorrespondenceMap& u,
                                 const LossConfig& cfg)
{
    LossResult result;
    fill_forward(result, critical_terms(map1, map2, u, cfg), cfg.alpha);
    return result;
}

std::pair<Field, Field> detector_loss_backward(const HeightMap& map1, const HeightMap& map2,
                                               const CorrespondenceMap& u, const LossConfig& cfg)
{
    return gradients(map1, map2, u, critical_terms(map1, map2, u, cfg), cfg.alpha);
}

LossResult detector_loss(const HeightMap& map1, const HeightMap& map2, const CorrespondenceMap& u,
                         const LossConfig& cfg)
{
    const auto critical = critical_terms(map1, map2, u, cfg);
    LossResult result;
    fill_forward(result, critical, cfg.alpha);
    std::tie(result.grad_map1, result.grad_map2) = gradients(map1, map2, u, critical, cfg.alpha);
    return result;
}

LossResult symmetrized_loss(const HeightMap& map1, const HeightMap& map2, const CorrespondenceMap& u12,
                            const CorrespondenceMap& u21, const LossConfig& cfg)
{
    LossResult forward = detector_loss(map1, map2, u12, cfg);
    LossResult backward = detector_loss(map2, map1, u21, cfg);

    LossResult result;
    result.loss = forward.loss + backward.loss;
    result.terms = std::move(forward.terms);
    result.terms.insert(result.terms.end(), backward.terms.begin(), backward.terms.end());
    result.grad_map1 = std::move(forward.grad_map1);
    result.grad_map2 = std::move(forward.grad_map2);
    for (std::size_t k = 0; k < result.grad_map1.values().size(); ++k)
        result.grad_map1[k] += backward.grad_map2[k];
    for (std::size_t k = 0; k < result.grad_map2.values().size(); ++k)
        result.grad_map2[k] += backward.grad_map1[k];
    return result;
}

} // namespace topokey
