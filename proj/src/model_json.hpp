#pragma once

// Internal: JSON form of a BlockingModel, shared by the single-model and
// multi-round serializers.

#include "cblock/blktree.hpp"

#include <json.hpp>

namespace cblock::detail {

nlohmann::json model_to_json(const BlockingModel& model);
BlockingModel model_from_json(const nlohmann::json& j);

}  // namespace cblock::detail
