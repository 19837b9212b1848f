#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topokey/detect.hpp"
#include "topokey/loss.hpp"
#include "topokey/persistence.hpp"

namespace topokey::serialize
{

/// {"pairs": [{"dim", "b", "d", "s_row", "s_col", "m_row", "m_col"}...],
///  "essential": [{"dim", "row", "col"}...]}
std::string diagram_json(std::span<const PersistencePair> pairs, std::span<const Cell> essential = {});

/// {"loss", "terms": [{"s": [r, c], "m": [r, c], "pers", "sim"}...]}; with
/// gradients, "grad_map1" / "grad_map2" hold matrix text.
std::string loss_json(const LossResult& result, bool with_gradients);

struct KeypointFile
{
    Shape shape;
    std::vector<Keypoint> keypoints;
};

/// {"rows", "cols", "keypoints": [{"row", "col", "score"[, "persistence"]}...]}
std::string keypoints_json(const KeypointFile& file);
KeypointFile parse_keypoints_json(std::string_view text, const std::string& source = "<keypoints>");

} // namespace topokey::serialize
