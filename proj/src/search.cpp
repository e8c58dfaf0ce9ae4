#include "cfex/search.hpp"

#include <algorithm>
#include <limits>

#include "best_first.hpp"
#include "cfex/error.hpp"

namespace cfex {

std::string_view to_string(Method method) { return method == Method::CFEX ? "CFEX" : "SEDC"; }

std::vector<int> Explanation::group_ids() const {
  std::vector<int> out;
  for (const auto& e : entries) out.push_back(e.group_id);
  return out;
}

std::set<int> Explanation::token_indices() const {
  std::set<int> out;
  for (const auto& e : entries) out.insert(e.member_indices.begin(), e.member_indices.end());
  return out;
}

Substitution Explanation::substitution() const {
  Substitution out;
  for (const auto& e : entries) {
    if (e.replacement) out.emplace(e.group_id, *e.replacement);
  }
  return out;
}

void SearchConfig::validate() const {
  if (max_explanation_size < 1) throw InvalidParams("max_explanation_size must be positive");
  if (max_iterations < 1) throw InvalidParams("max_iterations must be positive");
  if (mlm_k < 1) throw InvalidParams("mlm_k must be positive");
  if (!(decision_threshold > 0.0)) throw InvalidParams("decision_threshold must be positive");
  if (stop_after && *stop_after < 1) throw InvalidParams("stop_after must be positive");
  if (threads < 1) throw InvalidParams("threads must be positive");
}

Candidate choose(std::vector<Candidate>& explore) {
  if (explore.empty()) throw EmptyExplore();
  constexpr double kAbsent = std::numeric_limits<double>::infinity();
  auto better = [&](const Candidate& a, const Candidate& b) {
    double sa = a.best_observed_score.value_or(kAbsent);
    double sb = b.best_observed_score.value_or(kAbsent);
    if (sa != sb) return sa < sb;
    if (a.group_ids.size() != b.group_ids.size()) return a.group_ids.size() < b.group_ids.size();
    return a.group_ids < b.group_ids;
  };
  auto it = std::min_element(explore.begin(), explore.end(), better);
  Candidate out = std::move(*it);
  explore.erase(it);
  return out;
}

namespace {

struct CfexEvaluator {
  const TokenizedProgram& program;
  const Classifier& classifier;
  const MaskFiller& filler;
  Prediction original;
  std::vector<std::string> texts;
  int mlm_k;

  std::vector<Explanation> operator()(Candidate& candidate) const {
    if (candidate.group_ids.empty()) throw InvalidCandidate("candidate has no groups");
    for (int gid : candidate.group_ids) {
      if (!program.has_group(gid)) throw InvalidCandidate("candidate names unknown group " + std::to_string(gid));
    }
    std::vector<Explanation> found;
    std::vector<std::string> work = texts;
    for (const GroupFill& fill : fill_groups(program, filler, candidate.group_ids, mlm_k)) {
      for (const auto& [gid, text] : fill.substitution) {
        for (int idx : program.group(gid).member_indices) work[static_cast<std::size_t>(idx)] = text;
      }
      Prediction p = classifier.predict(work);
      for (const auto& [gid, text] : fill.substitution) {
        for (int idx : program.group(gid).member_indices) work[static_cast<std::size_t>(idx)] = texts[static_cast<std::size_t>(idx)];
      }

      if (!candidate.best_observed_score || p.score < *candidate.best_observed_score) {
        candidate.best_observed_score = p.score;
      }
      if (p.label == original.label) continue;

      Explanation e;
      e.method = Method::CFEX;
      e.flipped_score = p.score;
      for (const auto& [gid, text] : fill.substitution) {
        const auto& g = program.group(gid);
        e.entries.push_back({gid, g.canonical_text, text, g.member_indices});
      }
      found.push_back(std::move(e));
    }
    return found;
  }
};

}  // namespace

std::vector<Explanation> find_counterfactual(const TokenizedProgram& program, const Classifier& classifier,
                                             const MaskFiller& filler, Candidate& candidate, int mlm_k) {
  CfexEvaluator eval{program, classifier, filler, predict(classifier, program), program.texts(), mlm_k};
  return eval(candidate);
}

std::vector<Explanation> generate_explanations(const TokenizedProgram& program, const Classifier& classifier,
                                               const MaskFiller& filler, const SearchConfig& config) {
  config.validate();
  if (program.empty()) return {};
  CfexEvaluator eval{program, classifier, filler, predict(classifier, program), program.texts(), config.mlm_k};
  bool parallel_ok = classifier.concurrent_safe() && filler.concurrent_safe();
  return detail::best_first_search(program, config, eval, parallel_ok);
}

bool verify_explanation(const TokenizedProgram& program, const Classifier& classifier,
                        const Explanation& explanation) {
  Prediction original = predict(classifier, program);
  TokenizedProgram perturbed;
  if (explanation.method == Method::CFEX) {
    for (const auto& e : explanation.entries) {
      if (!e.replacement || *e.replacement == e.original) return false;
    }
    perturbed = apply_substitution(program, explanation.substitution());
  } else {
    std::set<int> removed;
    for (const auto& e : explanation.entries) removed.insert(e.group_id);
    perturbed = remove_groups(program, removed);
  }
  // removing every group leaves nothing, which is still a valid input here
  auto texts = perturbed.texts();
  Prediction after = classifier.predict(texts);
  return after.label != original.label && after.score == explanation.flipped_score;
}

bool touches_only_added_lines(const TokenizedProgram& program, const Explanation& explanation) {
  for (int idx : explanation.token_indices()) {
    if (program.tokens()[static_cast<std::size_t>(idx)].line_kind != LineKind::Added) return false;
  }
  return true;
}

}  // namespace cfex
