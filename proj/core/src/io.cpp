#include "topokey/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace topokey::io
{

namespace
{

bool is_space(char c)
{
    return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

// Parses one decimal token; returns false on garbage or trailing characters.
bool parse_double(std::string_view token, double& out)
{
    if (!token.empty() && token.front() == '+')
        token.remove_prefix(1);
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::vector<std::string_view> split_tokens(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t k = 0;
    while (k < line.size())
    {
        while (k < line.size() && is_space(line[k]))
            ++k;
        const std::size_t start = k;
        while (k < line.size() && !is_space(line[k]))
            ++k;
        if (k > start)
            out.push_back(line.substr(start, k - start));
    }
    return out;
}

} // namespace

std::string format_double(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

HeightMap parse_matrix_text(std::string_view text, const std::string& source)
{
    std::vector<double> values;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        const std::string_view line = text.substr(pos, end - pos);
        ++line_no;
        pos = end + 1;

        const auto tokens = split_tokens(line);
        if (tokens.empty())
        {
            if (end == text.size())
                break;
            continue;
        }
        if (rows == 0)
            cols = tokens.size();
        else if (tokens.size() != cols)
        {
            std::ostringstream msg;
            msg << "ragged row: expected " << cols << " values, found " << tokens.size();
            throw ParseError(source, line_no, msg.str());
        }
        for (auto t : tokens)
        {
            double v = 0.0;
            if (!parse_double(t, v))
                throw ParseError(source, line_no, "not a number: '" + std::string(t) + "'");
            if (!std::isfinite(v))
                throw ValueError(source + ":" + std::to_string(line_no) + ": non-finite value '" + std::string(t) + "'");
            values.push_back(v);
        }
        ++rows;
        if (end == text.size())
            break;
    }
    if (rows == 0)
        throw DimensionError(source + ": empty matrix");
    return HeightMap(rows, cols, std::move(values));
}

std::string format_matrix_text(std::span<const double> values, Shape shape)
{
    std::string out;
    for (std::size_t i = 0; i < shape.rows; ++i)
    {
        for (std::size_t j = 0; j < shape.cols; ++j)
        {
            if (j > 0)
                out += ' ';
            out += format_double(values[i * shape.cols + j]);
        }
        out += '\n';
    }
    return out;
}

HeightMap parse_pgm(std::string_view bytes, const std::string& source)
{
    std::size_t pos = 0;
    // Header tokens, skipping whitespace and '#' comments.
    auto next_token = [&]() -> std::string_view {
        while (pos < bytes.size())
        {
            if (bytes[pos] == '#')
            {
                while (pos < bytes.size() && bytes[pos] != '\n')
                    ++pos;
            }
            else if (is_space(bytes[pos]) || bytes[pos] == '\n')
                ++pos;
            else
                break;
        }
        const std::size_t start = pos;
        while (pos < bytes.size() && !is_space(bytes[pos]) && bytes[pos] != '\n')
            ++pos;
        return bytes.substr(start, pos - start);
    };
    auto next_int = [&](const char* what) {
        const auto t = next_token();
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
            throw ParseError(source, 0, std::string("bad PGM ") + what);
        return v;
    };

    const auto magic = next_token();
    if (magic != "P5" && magic != "P2")
        throw ParseError(source, 0, "not a PGM graymap (expected P2 or P5)");
    const std::size_t cols = next_int("width");
    const std::size_t rows = next_int("height");
    const std::size_t maxval = next_int("maxval");
    if (maxval != 255)
        throw ParseError(source, 0, "only 8-bit graymaps (maxval 255) are supported");
    if (rows == 0 || cols == 0)
        throw DimensionError(source + ": empty image");

    std::vector<double> values(rows * cols);
    if (magic == "P5")
    {
        ++pos; // single whitespace after maxval
        if (bytes.size() < pos + rows * cols)
            throw ParseError(source, 0, "truncated PGM pixel data");
        for (std::size_t k = 0; k < rows * cols; ++k)
            values[k] = static_cast<double>(static_cast<unsigned char>(bytes[pos + k])) / 255.0;
    }
    else
    {
        for (std::size_t k = 0; k < rows * cols; ++k)
        {
            const std::size_t p = next_int("pixel");
            if (p > 255)
                throw ParseError(source, 0, "pixel value exceeds maxval");
            values[k] = static_cast<double>(p) / 255.0;
        }
    }
    return HeightMap(rows, cols, std::move(values));
}

std::string format_pgm(const HeightMap& map)
{
    std::ostringstream out;
    out << "P5\n" << map.cols() << " " << map.rows() << "\n255\n";
    std::string body(map.size(), '\0');
    for (std::size_t k = 0; k < map.size(); ++k)
    {
        const double v = std::clamp(map.values()[k], 0.0, 1.0);
        body[k] = static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0)));
    }
    return out.str() + body;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out)
        throw Error("failed writing " + path.string());
}

HeightMap load_height_map(const std::filesystem::path& path)
{
    const std::string bytes = read_file(path);
    if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '2'))
        return parse_pgm(bytes, path.string());
    return parse_matrix_text(bytes, path.string());
}

Homography parse_homography(std::string_view text, const std::string& source)
{
    std::array<double, 9> m{};
    std::size_t n = 0;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size())
    {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        ++line_no;
        for (auto t : split_tokens(text.substr(pos, end - pos)))
        {
            if (n == 9)
                throw ParseError(source, line_no, "more than 9 homography entries");
            if (!parse_double(t, m[n]))
                throw ParseError(source, line_no, "not a number: '" + std::string(t) + "'");
            ++n;
        }
        pos = end + 1;
    }
    if (n != 9)
        throw ParseError(source, 0, "expected 9 homography entries, found " + std::to_string(n));
    return Homography(m);
}

Homography load_homography(const std::filesystem::path& path)
{
    return parse_homography(read_file(path), path.string());
}

std::string format_homography(const Homography& h)
{
    std::string out;
    for (std::size_t r = 0; r < 3; ++r)
    {
        for (std::size_t c = 0; c < 3; ++c)
        {
            if (c > 0)
                out += ' ';
            out += format_double(h(r, c));
        }
        out += '\n';
    }
    return out;
}

std::string format_overlay_ppm(const HeightMap& map, std::span<const Keypoint> keypoints)
{
    double lo = map.values()[0], hi = map.values()[0];
    for (double v : map.values())
    {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi > lo ? hi - lo : 1.0;

    std::string pixels(map.size() * 3, '\0');
    for (std::size_t k = 0; k < map.size(); ++k)
    {
        const auto g = static_cast<char>(static_cast<unsigned char>(std::lround((map.values()[k] - lo) / span * 255.0)));
        pixels[3 * k] = pixels[3 * k + 1] = pixels[3 * k + 2] = g;
    }
    const auto rows = static_cast<std::int32_t>(map.rows());
    const auto cols = static_cast<std::int32_t>(map.cols());
    for (const auto& kp : keypoints)
    {
        for (std::int32_t d = -2; d <= 2; ++d)
        {
            for (const Vertex v : {Vertex{kp.position.row + d, kp.position.col}, Vertex{kp.position.row, kp.position.col + d}})
            {
                if (v.row < 0 || v.col < 0 || v.row >= rows || v.col >= cols)
                    continue;
                const std::size_t k = map.offset(v);
                pixels[3 * k] = static_cast<char>(255);
                pixels[3 * k + 1] = 0;
                pixels[3 * k + 2] = 0;
            }
        }
    }
    std::ostringstream header;
    header << "P6\n" << map.cols() << " " << map.rows() << "\n255\n";
    return header.str() + pixels;
}

HeightMap resize_bilinear(const HeightMap& map, Shape target)
{
    if (target.rows == 0 || target.cols == 0)
        throw DimensionError("resize target must be non-empty");
    const double sy = static_cast<double>(map.rows()) / static_cast<double>(target.rows);
    const double sx = static_cast<double>(map.cols()) / static_cast<double>(target.cols);
    const double max_y = static_cast<double>(map.rows() - 1);
    const double max_x = static_cast<double>(map.cols() - 1);

    std::vector<double> out(target.size());
    for (std::size_t i = 0; i < target.rows; ++i)
    {
        const double y = std::min(static_cast<double>(i) * sy, max_y);
        const auto y0 = static_cast<std::size_t>(std::floor(y));
        const std::size_t y1 = std::min(y0 + 1, map.rows() - 1);
        const double fy = y - static_cast<double>(y0);
        for (std::size_t j = 0; j < target.cols; ++j)
        {
            const double x = std::min(static_cast<double>(j) * sx, max_x);
            const auto x0 = static_cast<std::size_t>(std::floor(x));
            const std::size_t x1 = std::min(x0 + 1, map.cols() - 1);
            const double fx = x - static_cast<double>(x0);
            const double top = map(y0, x0) * (1.0 - fx) + map(y0, x1) * fx;
            const double bottom = map(y1, x0) * (1.0 - fx) + map(y1, x1) * fx;
            out[i * target.cols + j] = top * (1.0 - fy) + bottom * fy;
        }
    }
    return HeightMap(target, std::move(out));
}

} // namespace topokey::io
