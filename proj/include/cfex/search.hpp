#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cfex/diff.hpp"
#include "cfex/model.hpp"

namespace cfex {

enum class Method { CFEX, SEDC };
std::string_view to_string(Method method);

struct SubstitutionEntry {
  int group_id = 0;
  std::string original;
  std::optional<std::string> replacement;  // empty for removals
  std::vector<int> member_indices;

  friend bool operator==(const SubstitutionEntry&, const SubstitutionEntry&) = default;
};

/// A verified perturbation that flips the classifier. Entries are sorted by
/// group id; size is the number of perturbed consistency groups.
struct Explanation {
  std::vector<SubstitutionEntry> entries;
  double flipped_score = 0.0;
  Method method = Method::CFEX;

  int size() const { return static_cast<int>(entries.size()); }
  std::vector<int> group_ids() const;
  /// Union of member indices in the original program.
  std::set<int> token_indices() const;
  /// Only meaningful for CFEX explanations.
  Substitution substitution() const;

  friend bool operator==(const Explanation&, const Explanation&) = default;
};

struct SearchConfig {
  int max_explanation_size = 5;
  int max_iterations = 100;  // ITER: iterations after the singleton round
  int mlm_k = 10;
  double decision_threshold = 0.5;
  std::optional<int> stop_after;
  /// Worker threads for evaluating one iteration's candidates. Only used
  /// when both adapters are concurrent-safe.
  int threads = 1;

  /// Throws InvalidParams unless every field is positive.
  void validate() const;
};

/// A set of consistency groups under consideration, plus the lowest
/// positive-class score any of its perturbations produced.
struct Candidate {
  std::vector<int> group_ids;  // sorted ascending
  std::optional<double> best_observed_score;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// Removes and returns the candidate with the lowest observed score (absent
/// scores rank last); ties go to the smaller candidate, then to the
/// lexicographically smallest group id sequence. Throws EmptyExplore.
Candidate choose(std::vector<Candidate>& explore);

/// Masks every member of every group in `candidate`, asks the filler for up
/// to `mlm_k` replacements and keeps those that change the predicted label.
/// Fill candidates that leave any group unchanged are skipped, since their
/// domain is not exactly `candidate`. Updates candidate.best_observed_score.
/// Throws InvalidCandidate for an empty candidate.
std::vector<Explanation> find_counterfactual(const TokenizedProgram& program, const Classifier& classifier,
                                             const MaskFiller& filler, Candidate& candidate, int mlm_k = 10);

/// Best-first search over growing candidate sets. Round 0 tries every
/// singleton group; each later iteration extends the chosen candidate by one
/// group that is not part of any explanation found so far. Candidates that
/// produce explanations are never grown. Returns explanations in discovery
/// order; an empty result is not an error.
std::vector<Explanation> generate_explanations(const TokenizedProgram& program, const Classifier& classifier,
                                               const MaskFiller& filler, const SearchConfig& config = {});

/// Re-applies the explanation to the original program through diff-core and
/// checks the label flips with exactly the recorded score.
bool verify_explanation(const TokenizedProgram& program, const Classifier& classifier,
                        const Explanation& explanation);

/// True when every touched token sits on an added line.
bool touches_only_added_lines(const TokenizedProgram& program, const Explanation& explanation);

}  // namespace cfex
