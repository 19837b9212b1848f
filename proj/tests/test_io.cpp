#include <doctest.h>

#include <filesystem>
#include <json.hpp>

#include "support.hpp"
#include "topokey/io.hpp"
#include "topokey/serialize.hpp"

using namespace topokey;
using namespace topokey::test;
using nlohmann::json;

namespace
{

std::filesystem::path scratch(const std::string& name)
{
    return std::filesystem::temp_directory_path() / "topokey_tests" / name;
}

} // namespace

TEST_CASE("matrix text round trip")
{
    const auto map = random_distinct({7, 5}, 1);
    CHECK(io::parse_matrix_text(io::format_matrix_text(map)) == map);
    CHECK(io::parse_matrix_text("  1\t2 \n\n3 4\n") == HeightMap(2, 2, {1, 2, 3, 4}));
    CHECK(io::parse_matrix_text("1e-3 -2.5\n") == HeightMap(1, 2, {1e-3, -2.5}));
}

TEST_CASE("parse errors carry source and line")
{
    try
    {
        io::parse_matrix_text("1 2\n3 4\n5\n", "grid.txt");
        FAIL("expected a parse error");
    }
    catch (const ParseError& e)
    {
        CHECK(e.source() == "grid.txt");
        CHECK(e.line() == 3);
    }
    try
    {
        io::parse_matrix_text("1 2\n3 x\n", "bad.txt");
        FAIL("expected a parse error");
    }
    catch (const ParseError& e)
    {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(io::parse_matrix_text("\n \n"), DimensionError);
    CHECK_THROWS_AS(io::parse_matrix_text("1 inf"), ValueError);
}

TEST_CASE("graymaps")
{
    const std::string p5 = std::string("P5\n# comment\n2 1\n255\n") + char(255) + char(0);
    const auto m = io::parse_pgm(p5);
    CHECK(m.rows() == 1);
    CHECK(m.cols() == 2);
    CHECK(m(0, 0) == 1.0);
    CHECK(m(0, 1) == 0.0);

    const auto ascii = io::parse_pgm("P2 2 2 255\n0 51\n102 255\n");
    CHECK(ascii(1, 0) == 102.0 / 255.0);

    const auto q = io::parse_pgm(io::format_pgm(ascii));
    CHECK(q == ascii);

    CHECK_THROWS_AS(io::parse_pgm("P5\n2 2\n255\n\x01"), ParseError);
    CHECK_THROWS_AS(io::parse_pgm("P5\n1 1\n65535\n\x01\x02"), ParseError);
}

TEST_CASE("files")
{
    const auto text = scratch("grid.txt");
    io::write_file(text, "4 1\n2 3\n");
    CHECK(io::load_height_map(text) == HeightMap(2, 2, {4, 1, 2, 3}));
    const auto img = scratch("grid.pgm");
    io::write_file(img, io::format_pgm(HeightMap(1, 2, {0.0, 1.0})));
    CHECK(io::load_height_map(img) == HeightMap(1, 2, {0.0, 1.0}));
    CHECK_THROWS_AS(io::load_height_map(scratch("missing.txt")), Error);
}

TEST_CASE("homography text")
{
    const Homography h({1.5, 0.25, -3, 0.125, 2, 7, 1e-3, 0, 1});
    CHECK(io::parse_homography(io::format_homography(h)).matrix() == h.matrix());
    CHECK_THROWS_AS(io::parse_homography("1 0 0 0 1 0 0 0"), ParseError);
    CHECK_THROWS_AS(io::parse_homography("0 0 0 0 0 0 0 0 0"), ValueError);
}

TEST_CASE("bilinear resize")
{
    const auto map = random_distinct({6, 8}, 2);
    CHECK(io::resize_bilinear(map, map.shape()) == map);
    const auto up = io::resize_bilinear(HeightMap(2, 2, {0, 1, 2, 3}), {4, 4});
    CHECK(up(0, 0) == 0.0);
    CHECK(up(0, 1) == 0.5);
    CHECK(up(1, 1) == doctest::Approx(1.5));
    CHECK(up(3, 3) == 3.0);
}

TEST_CASE("diagram json")
{
    const auto gens = h1_generators(example3x3());
    const auto doc = json::parse(serialize::diagram_json(gens, std::vector<Cell>{Cell::vertex({0, 0})}));
    REQUIRE(doc["pairs"].size() == 1);
    const auto& p = doc["pairs"][0];
    CHECK(p["dim"] == 1);
    CHECK(p["b"] == 8.0);
    CHECK(p["d"] == 9.0);
    CHECK(p["s_row"] == 1);
    CHECK(p["s_col"] == 0);
    CHECK(p["m_row"] == 1);
    CHECK(p["m_col"] == 1);
    CHECK(doc["essential"][0]["row"] == 0);
}

TEST_CASE("loss json")
{
    const auto m = example3x3();
    const auto r = detector_loss(m, m, CorrespondenceMap::identity(m.shape()));
    const auto doc = json::parse(serialize::loss_json(r, true));
    CHECK(doc["loss"] == -1.0);
    CHECK(doc["terms"][0]["pers"] == 1.0);
    CHECK(doc["terms"][0]["sim"] == 0.0);
    CHECK(doc["terms"][0]["s"] == json::array({1, 0}));
    const auto g1 = io::parse_matrix_text(doc["grad_map1"].get<std::string>());
    CHECK(g1(1, 0) == 2.0);
    CHECK(g1(1, 1) == -2.0);
    CHECK_FALSE(json::parse(serialize::loss_json(r, false)).contains("grad_map1"));
}

TEST_CASE("keypoint json round trip")
{
    serialize::KeypointFile f{{10, 12}, {{{1, 2}, 0.5, std::nullopt}, {{9, 11}, 0.25, 0.125}}};
    const auto back = serialize::parse_keypoints_json(serialize::keypoints_json(f));
    CHECK(back.shape == f.shape);
    CHECK(back.keypoints == f.keypoints);

    CHECK_THROWS_AS(serialize::parse_keypoints_json("{"), ParseError);
    CHECK_THROWS_AS(serialize::parse_keypoints_json(R"({"rows": 2, "cols": 2, "keypoints": [{"row": 5, "col": 0, "score": 1}]})"),
                    ParseError);
    CHECK_THROWS_AS(serialize::parse_keypoints_json(R"({"rows": 2, "keypoints": []})"), ParseError);
}

TEST_CASE("overlay raster")
{
    const auto map = example3x3(0.1);
    const std::vector<Keypoint> kps{{{1, 1}, 0.9, std::nullopt}};
    const auto ppm = io::format_overlay_ppm(map, kps);
    CHECK(ppm.rfind("P6", 0) == 0);
}
