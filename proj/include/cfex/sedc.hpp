#pragma once

#include <set>
#include <vector>

#include "cfex/diff.hpp"
#include "cfex/model.hpp"
#include "cfex/search.hpp"

namespace cfex {

/// Groups whose removal from the token sequence flips the prediction.
struct RemovalExplanation {
  std::set<int> removed_group_ids;
  double flipped_score = 0.0;
  int size = 0;

  Explanation to_explanation(const TokenizedProgram& program) const;
  friend bool operator==(const RemovalExplanation&, const RemovalExplanation&) = default;
};

/// Occlusion baseline: the same best-first search as generate_explanations,
/// with "perturb" meaning "delete every member token". Never touches a mask
/// filler. config.mlm_k is ignored.
std::vector<RemovalExplanation> sedc_explain(const TokenizedProgram& program, const Classifier& classifier,
                                             const SearchConfig& config = {});

}  // namespace cfex
