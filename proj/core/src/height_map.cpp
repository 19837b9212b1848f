#include "topokey/height_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace topokey
{

namespace
{

std::string describe_parse_error(const std::string& source, std::size_t line, const std::string& what)
{
    std::ostringstream out;
    out << source;
    if (line > 0)
        out << ":" << line;
    out << ": " << what;
    return out.str();
}

} // namespace

ParseError::ParseError(std::string source, std::size_t line, const std::string& what)
    : Error(describe_parse_error(source, line, what))
    , source_(std::move(source))
    , line_(line)
{
}

Field::Field(Shape shape, double fill)
    : shape_(shape)
    , data_(shape.size(), fill)
{
}

HeightMap::HeightMap(Shape shape, std::vector<double> values)
    : shape_(shape)
    , values_(std::move(values))
{
    if (shape_.rows == 0 || shape_.cols == 0)
        throw DimensionError("height map must have at least one row and one column");
    if (values_.size() != shape_.size())
        throw DimensionError("height map value count does not match its shape");
    if (shape_.rows > std::numeric_limits<std::int32_t>::max()
        || shape_.cols > std::numeric_limits<std::int32_t>::max())
        throw DimensionError("height map is too large");
    for (std::size_t k = 0; k < values_.size(); ++k)
    {
        if (!std::isfinite(values_[k]))
        {
            std::ostringstream msg;
            msg << "non-finite value at (" << k / shape_.cols << ", " << k % shape_.cols << ")";
            throw ValueError(msg.str());
        }
    }
}

HeightMap HeightMap::from_rows(const std::vector<std::vector<double>>& rows)
{
    if (rows.empty() || rows.front().empty())
        throw DimensionError("height map must have at least one row and one column");
    const std::size_t cols = rows.front().size();
    std::vector<double> values;
    values.reserve(rows.size() * cols);
    for (const auto& row : rows)
    {
        if (row.size() != cols)
            throw DimensionError("ragged rows in height map");
        values.insert(values.end(), row.begin(), row.end());
    }
    return HeightMap(rows.size(), cols, std::move(values));
}

HeightMap HeightMap::from_field(const Field& field)
{
    auto v = field.values();
    return HeightMap(field.shape(), std::vector<double>(v.begin(), v.end()));
}

double HeightMap::at(Vertex v) const
{
    if (!shape_.contains(v))
        throw std::out_of_range("vertex outside height map");
    return (*this)(v);
}

Field HeightMap::to_field() const
{
    Field f(shape_);
    std::copy(values_.begin(), values_.end(), f.values().begin());
    return f;
}

std::vector<Vertex> vertex_order(const HeightMap& map)
{
    std::vector<std::uint32_t> offsets(map.size());
    std::iota(offsets.begin(), offsets.end(), 0u);
    std::sort(offsets.begin(), offsets.end(), [&](std::uint32_t a, std::uint32_t b) {
        return tie_break_key(map, map.vertex(a)) < tie_break_key(map, map.vertex(b));
    });
    std::vector<Vertex> order;
    order.reserve(offsets.size());
    for (auto o : offsets)
        order.push_back(map.vertex(o));
    return order;
}

std::vector<std::uint32_t> vertex_ranks(const HeightMap& map)
{
    const auto order = vertex_order(map);
    std::vector<std::uint32_t> rank(map.size());
    for (std::size_t r = 0; r < order.size(); ++r)
        rank[map.offset(order[r])] = static_cast<std::uint32_t>(r);
    return rank;
}

double min_value_gap(const HeightMap& map)
{
    std::vector<double> sorted(map.values().begin(), map.values().end());
    std::sort(sorted.begin(), sorted.end());
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < sorted.size(); ++k)
    {
        const double d = sorted[k] - sorted[k - 1];
        if (d > 0.0)
            gap = std::min(gap, d);
    }
    return gap;
}

} // namespace topokey
