#include "topokey/serialize.hpp"

#include <json.hpp>

#include "topokey/io.hpp"

namespace topokey::serialize
{

using nlohmann::ordered_json;

std::string diagram_json(std::span<const PersistencePair> pairs, std::span<const Cell> essential)
{
    ordered_json doc;
    doc["pairs"] = ordered_json::array();
    for (const auto& p : pairs)
    {
        doc["pairs"].push_back({
            {"dim", p.dim},
            {"b", p.birth},
            {"d", p.death},
            {"s_row", p.birth_vertex.row},
            {"s_col", p.birth_vertex.col},
            {"m_row", p.death_vertex.row},
            {"m_col", p.death_vertex.col},
        });
    }
    doc["essential"] = ordered_json::array();
    for (const auto& c : essential)
        doc["essential"].push_back({{"dim", c.dim}, {"row", c.anchor.row}, {"col", c.anchor.col}});
    return doc.dump(2) + "\n";
}

std::string loss_json(const LossResult& result, bool with_gradients)
{
    ordered_json doc;
    doc["loss"] = result.loss;
    doc["terms"] = ordered_json::array();
    for (const auto& t : result.terms)
    {
        doc["terms"].push_back({
            {"s", {t.saddle.row, t.saddle.col}},
            {"m", {t.peak.row, t.peak.col}},
            {"pers", t.persistence},
            {"sim", t.similarity},
        });
    }
    if (with_gradients)
    {
        doc["grad_map1"] = io::format_matrix_text(result.grad_map1);
        doc["grad_map2"] = io::format_matrix_text(result.grad_map2);
    }
    return doc.dump(2) + "\n";
}

std::string keypoints_json(const KeypointFile& file)
{
    ordered_json doc;
    doc["rows"] = file.shape.rows;
    doc["cols"] = file.shape.cols;
    doc["keypoints"] = ordered_json::array();
    for (const auto& k : file.keypoints)
    {
        ordered_json rec{{"row", k.position.row}, {"col", k.position.col}, {"score", k.score}};
        if (k.persistence)
            rec["persistence"] = *k.persistence;
        doc["keypoints"].push_back(std::move(rec));
    }
    return doc.dump(2) + "\n";
}

KeypointFile parse_keypoints_json(std::string_view text, const std::string& source)
{
    ordered_json doc;
    try
    {
        doc = ordered_json::parse(text);
    }
    catch (const ordered_json::parse_error& e)
    {
        throw ParseError(source, 0, e.what());
    }
    try
    {
        KeypointFile file;
        file.shape = {doc.at("rows").get<std::size_t>(), doc.at("cols").get<std::size_t>()};
        for (const auto& rec : doc.at("keypoints"))
        {
            Keypoint k;
            k.position = {rec.at("row").get<std::int32_t>(), rec.at("col").get<std::int32_t>()};
            k.score = rec.value("score", 0.0);
            if (rec.contains("persistence"))
                k.persistence = rec.at("persistence").get<double>();
            if (!file.shape.contains(k.position))
                throw ParseError(source, 0, "keypoint outside the declared image shape");
            file.keypoints.push_back(k);
        }
        return file;
    }
    catch (const ordered_json::exception& e)
    {
        throw ParseError(source, 0, std::string("malformed keypoints: ") + e.what());
    }
}

} // namespace topokey::serialize
