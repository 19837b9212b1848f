#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace topokey
{

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed textual or binary input. Carries the source name and 1-based line
/// when known (line 0 means "not line oriented").
class ParseError : public Error
{
public:
    ParseError(std::string source, std::size_t line, const std::string& what);

    const std::string& source() const { return source_; }
    std::size_t line() const { return line_; }

private:
    std::string source_;
    std::size_t line_;
};

class DimensionError : public Error
{
public:
    using Error::Error;
};

class ValueError : public Error
{
public:
    using Error::Error;
};

class ShapeError : public Error
{
public:
    using Error::Error;
};

struct Vertex
{
    std::int32_t row = 0;
    std::int32_t col = 0;

    friend constexpr bool operator==(Vertex, Vertex) = default;
    friend constexpr auto operator<=>(Vertex, Vertex) = default;
};

struct Shape
{
    std::size_t rows = 0;
    std::size_t cols = 0;

    std::size_t size() const { return rows * cols; }
    bool contains(Vertex v) const
    {
        return v.row >= 0 && v.col >= 0 && static_cast<std::size_t>(v.row) < rows
               && static_cast<std::size_t>(v.col) < cols;
    }

    friend constexpr bool operator==(Shape, Shape) = default;
};

/// Dense row-major scalar field without value restrictions. Used for gradients
/// and as mutable scratch storage during optimization.
class Field
{
public:
    Field() = default;
    Field(Shape shape, double fill = 0.0);

    Shape shape() const { return shape_; }
    std::size_t rows() const { return shape_.rows; }
    std::size_t cols() const { return shape_.cols; }

    double& operator()(Vertex v) { return data_[offset(v)]; }
    double operator()(Vertex v) const { return data_[offset(v)]; }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }

    std::size_t offset(Vertex v) const
    {
        return static_cast<std::size_t>(v.row) * shape_.cols + static_cast<std::size_t>(v.col);
    }

private:
    Shape shape_{};
    std::vector<double> data_;
};

/// Immutable 2D height map. Values are finite and stored row-major; a vertex
/// (i, j) lives at storage offset i * cols + j.
class HeightMap
{
public:
    /// Throws DimensionError for an empty grid or a size mismatch, ValueError
    /// for non-finite entries.
    HeightMap(Shape shape, std::vector<double> values);
    HeightMap(std::size_t rows, std::size_t cols, std::vector<double> values)
        : HeightMap(Shape{rows, cols}, std::move(values))
    {
    }

    /// Builds a map from nested rows. Ragged input throws DimensionError.
    static HeightMap from_rows(const std::vector<std::vector<double>>& rows);
    static HeightMap from_field(const Field& field);

    Shape shape() const { return shape_; }
    std::size_t rows() const { return shape_.rows; }
    std::size_t cols() const { return shape_.cols; }
    std::size_t size() const { return values_.size(); }

    double operator()(Vertex v) const { return values_[offset(v)]; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * shape_.cols + j]; }
    double at(Vertex v) const;
    std::span<const double> values() const { return values_; }

    std::size_t offset(Vertex v) const
    {
        return static_cast<std::size_t>(v.row) * shape_.cols + static_cast<std::size_t>(v.col);
    }
    Vertex vertex(std::size_t offset) const
    {
        return {static_cast<std::int32_t>(offset / shape_.cols),
                static_cast<std::int32_t>(offset % shape_.cols)};
    }

    /// Column-fastest tie-break index i + rows * j.
    std::size_t tie_index(Vertex v) const
    {
        return static_cast<std::size_t>(v.row) + shape_.rows * static_cast<std::size_t>(v.col);
    }

    Field to_field() const;

    friend bool operator==(const HeightMap&, const HeightMap&) = default;

private:
    Shape shape_;
    std::vector<double> values_;
};

/// Strict total order on vertices: by value, then by tie index i + rows * j.
/// Exact stand-in for an infinitesimal index-proportional perturbation.
struct TieBreakKey
{
    double value;
    std::size_t index;

    friend bool operator<(const TieBreakKey& a, const TieBreakKey& b)
    {
        if (a.value != b.value)
            return a.value < b.value;
        return a.index < b.index;
    }
    friend bool operator==(const TieBreakKey&, const TieBreakKey&) = default;
};

inline TieBreakKey tie_break_key(const HeightMap& map, Vertex v)
{
    return {map(v), map.tie_index(v)};
}

/// Vertices in ascending TieBreakKey order.
std::vector<Vertex> vertex_order(const HeightMap& map);

/// rank[offset] = position of that vertex in vertex_order(map).
std::vector<std::uint32_t> vertex_ranks(const HeightMap& map);

/// Smallest positive difference between two entries; +inf if fewer than two
/// distinct values exist.
double min_value_gap(const HeightMap& map);

} // namespace topokey
