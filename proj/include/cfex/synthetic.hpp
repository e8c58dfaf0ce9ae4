#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "cfex/diff.hpp"
#include "cfex/evaluation.hpp"
#include "cfex/model.hpp"

namespace cfex {

/// A synthetic diff whose reference classifier is positive while any trigger
/// identifier is present, so the minimal counterfactual must replace every
/// trigger group.
struct PlantedInstance {
  std::uint64_t seed = 0;
  int n_tokens = 0;
  Diff diff;
  std::vector<std::string> triggers;
  std::vector<std::string> neutral_vocab;
  int expected_min_size = 0;
  /// Training lines for the reference filler: the diff lines plus copies
  /// with triggers swapped for neutral words.
  std::vector<std::string> fill_corpus;

  std::string diff_text() const;
  TriggerClassifier classifier(double threshold = 0.5) const;
  NgramFiller filler() const;
  /// Every token index of every trigger group.
  Rationale rationale(const TokenizedProgram& program, std::string diff_id) const;
  /// Group ids of the trigger identifiers in `program`.
  std::set<int> trigger_groups(const TokenizedProgram& program) const;

  nlohmann::json sidecar() const;
};

/// Deterministic in `seed`. Requires 1 <= n_triggers <= 3 and
/// n_tokens >= 10 * n_triggers; throws InvalidParams otherwise.
PlantedInstance generate_instance(std::uint64_t seed, int n_tokens, int n_triggers);

/// Writes `<dir>/<id>.diff` and the `<dir>/<id>.instance.json` sidecar.
void write_instance(const std::filesystem::path& dir, const std::string& id, const PlantedInstance& instance);
/// Reads a diff and its sidecar (same stem, ".instance.json").
PlantedInstance read_instance(const std::filesystem::path& diff_path);
std::filesystem::path sidecar_path(const std::filesystem::path& diff_path);

inline constexpr std::size_t kOracleMaxGroups = 60;

/// Exhaustive reference: every group subset of size 1..max_size times every
/// fill candidate, each checked by substituting through diff-core and
/// predicting. With `minimal_only`, substitutions whose domain strictly
/// contains a domain that already flips are dropped, which is the set the
/// best-first search can reach. Throws InvalidParams for max_size outside
/// [1,2] and TooLarge beyond kOracleMaxGroups groups.
std::set<Substitution> brute_force_oracle(const TokenizedProgram& program, const Classifier& classifier,
                                          const MaskFiller& filler, int max_size, int mlm_k = 10,
                                          bool minimal_only = true);

}  // namespace cfex
