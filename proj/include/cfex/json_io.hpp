#pragma once

#include <filesystem>

#include "json.hpp"
#include "cfex/diff.hpp"
#include "cfex/evaluation.hpp"
#include "cfex/ranking.hpp"
#include "cfex/search.hpp"

namespace cfex {

using nlohmann::json;

/// {tokens:[{index,text,kind,line_no,col,line_kind}], groups:[{group_id,members,text}]}
json to_json(const TokenizedProgram& program);

/// {method,size,flipped_score,substitutions:[{group_id,original,replacement,member_indices}]}
/// plus "rank" (1-based) when given. SEDC replacements are null.
json to_json(const Explanation& explanation, std::optional<int> rank = std::nullopt);
json to_json(const RankedExplanations& ranked);

/// {diff_id, attributed_indices:[...]}
json to_json(const Rationale& rationale);
Rationale rationale_from_json(const json& j);
Rationale read_rationale(const std::filesystem::path& path);

}  // namespace cfex
