#include "cfex/sedc.hpp"

#include "best_first.hpp"

namespace cfex {

Explanation RemovalExplanation::to_explanation(const TokenizedProgram& program) const {
  Explanation e;
  e.method = Method::SEDC;
  e.flipped_score = flipped_score;
  for (int gid : removed_group_ids) {
    const auto& g = program.group(gid);
    e.entries.push_back({gid, g.canonical_text, std::nullopt, g.member_indices});
  }
  return e;
}

namespace {

struct RemovalEvaluator {
  const TokenizedProgram& program;
  const Classifier& classifier;
  Prediction original;

  std::vector<Explanation> operator()(Candidate& candidate) const {
    std::vector<bool> drop(program.size(), false);
    for (int gid : candidate.group_ids) {
      for (int idx : program.group(gid).member_indices) drop[static_cast<std::size_t>(idx)] = true;
    }
    std::vector<std::string> kept;
    kept.reserve(program.size());
    for (const Token& t : program.tokens()) {
      if (!drop[static_cast<std::size_t>(t.index)]) kept.push_back(t.text);
    }
    Prediction p = classifier.predict(kept);
    candidate.best_observed_score = p.score;
    if (p.label == original.label) return {};

    RemovalExplanation r{std::set<int>(candidate.group_ids.begin(), candidate.group_ids.end()), p.score,
                         static_cast<int>(candidate.group_ids.size())};
    return {r.to_explanation(program)};
  }
};

}  // namespace

std::vector<RemovalExplanation> sedc_explain(const TokenizedProgram& program, const Classifier& classifier,
                                             const SearchConfig& config) {
  config.validate();
  if (program.empty()) return {};
  RemovalEvaluator eval{program, classifier, predict(classifier, program)};
  auto found = detail::best_first_search(program, config, eval, classifier.concurrent_safe());
  std::vector<RemovalExplanation> out;
  out.reserve(found.size());
  for (const Explanation& e : found) {
    auto ids = e.group_ids();
    out.push_back({std::set<int>(ids.begin(), ids.end()), e.flipped_score, e.size()});
  }
  return out;
}

}  // namespace cfex
