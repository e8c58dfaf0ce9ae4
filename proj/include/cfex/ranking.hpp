#pragma once

#include <vector>

#include "cfex/search.hpp"

namespace cfex {

inline constexpr int kDefaultTopK = 5;

struct RankedExplanations {
  Method method = Method::CFEX;
  std::vector<Explanation> items;  // best first, at most truncated_to
  int truncated_to = kDefaultTopK;
  /// Sizes of every explanation handed to rank(), before truncation.
  std::vector<int> all_sizes;

  int total() const { return static_cast<int>(all_sizes.size()); }
};

/// Max minus min token index over every touched token; 0 for one token.
int proximity_span(const Explanation& explanation, const TokenizedProgram& program);

/// Orders by (flipped_score, size, proximity_span, method, substitution
/// entries) ascending and keeps the first `truncate`. The order is total, so
/// the output does not depend on input order.
RankedExplanations rank(std::vector<Explanation> explanations, const TokenizedProgram& program,
                        int truncate = kDefaultTopK, Method method = Method::CFEX);

}  // namespace cfex
