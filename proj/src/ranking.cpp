#include "cfex/ranking.hpp"

#include <algorithm>
#include <tuple>

#include "cfex/error.hpp"

namespace cfex {

int proximity_span(const Explanation& explanation, const TokenizedProgram& program) {
  int lo = -1;
  int hi = -1;
  for (const auto& entry : explanation.entries) {
    for (int idx : program.group(entry.group_id).member_indices) {
      if (lo < 0 || idx < lo) lo = idx;
      if (hi < 0 || idx > hi) hi = idx;
    }
  }
  return lo < 0 ? 0 : hi - lo;
}

namespace {

using EntryKey = std::tuple<int, std::string, bool, std::string>;

std::vector<EntryKey> entry_keys(const Explanation& e) {
  std::vector<EntryKey> keys;
  for (const auto& s : e.entries) {
    keys.emplace_back(s.group_id, s.original, s.replacement.has_value(), s.replacement.value_or(""));
  }
  return keys;
}

}  // namespace

RankedExplanations rank(std::vector<Explanation> explanations, const TokenizedProgram& program, int truncate,
                        Method method) {
  if (truncate < 0) throw InvalidParams("truncate must be non-negative");
  RankedExplanations out;
  out.method = method;
  out.truncated_to = truncate;
  for (const auto& e : explanations) out.all_sizes.push_back(e.size());

  struct Keyed {
    double score;
    int size;
    int span;
    int method;
    std::vector<EntryKey> entries;
    std::size_t index;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(explanations.size());
  for (std::size_t i = 0; i < explanations.size(); ++i) {
    const auto& e = explanations[i];
    keyed.push_back({e.flipped_score, e.size(), proximity_span(e, program), static_cast<int>(e.method),
                     entry_keys(e), i});
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    return std::tie(a.score, a.size, a.span, a.method, a.entries) <
           std::tie(b.score, b.size, b.span, b.method, b.entries);
  });
  for (std::size_t i = 0; i < keyed.size() && static_cast<int>(i) < truncate; ++i) {
    out.items.push_back(std::move(explanations[keyed[i].index]));
  }
  return out;
}

}  // namespace cfex
