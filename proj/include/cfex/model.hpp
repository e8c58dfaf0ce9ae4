#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cfex/diff.hpp"

namespace cfex {

/// Stands in for a masked token in a FillRequest. The lexer never produces
/// it, since '[' and ']' are separate tokens.
inline constexpr std::string_view kMaskToken = "[MASK]";

struct Prediction {
  bool label = false;  // true = positive class
  double score = 0.0;  // probability of the positive class

  static Prediction from_score(double score, double threshold) { return {score >= threshold, score}; }
  friend bool operator==(const Prediction&, const Prediction&) = default;
};

struct FillRequest {
  std::vector<std::string> tokens;  // masked positions hold kMaskToken
  std::vector<int> mask_positions;  // strictly increasing
  int k = 10;
  /// Optional: sets of mask positions that must receive the same text (one
  /// set per consistency group). Fillers may ignore it.
  std::vector<std::vector<int>> tied_positions;

  /// Throws InvalidParams when an invariant is violated.
  void validate() const;
};

struct FillCandidate {
  std::vector<std::string> replacements;  // one per mask position
  double likelihood = 0.0;
};

/// Black-box binary classifier over token texts.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual Prediction predict(std::span<const std::string> tokens) const = 0;
  virtual std::string identity() const = 0;
  /// False means callers must serialize access.
  virtual bool concurrent_safe() const { return true; }
};

/// Black-box mask filler. Returns at most request.k candidates, unique as
/// joint assignments, sorted by non-increasing likelihood.
class MaskFiller {
 public:
  virtual ~MaskFiller() = default;
  virtual std::vector<FillCandidate> fill_mask(const FillRequest& request) const = 0;
  virtual std::string identity() const = 0;
  virtual bool concurrent_safe() const { return true; }
};

Prediction predict(const Classifier& classifier, const TokenizedProgram& program);

/// Asks `filler` for replacements of every member token of `group_ids`
/// (all masked at once, members of a group tied together) and maps each
/// candidate to one text per group, taken at the group's first member.
/// Only fills that change every group are kept, without duplicates; the
/// request is widened (up to fill_request_cap(k)) until k such fills are
/// found or the filler runs out. Results stay in filler order.
struct GroupFill {
  Substitution substitution;  // group id -> replacement
  double likelihood = 0.0;
};
/// Largest k fill_groups will ever send to a filler.
inline int fill_request_cap(int k) { return 32 * (k + 1); }

std::vector<GroupFill> fill_groups(const TokenizedProgram& program, const MaskFiller& filler,
                                   std::span<const int> group_ids, int k);

enum class TriggerMode {
  Any,  // positive iff at least one trigger occurs
  All,  // positive iff every trigger occurs
};

/// Reference classifier: positive when trigger tokens are present.
/// Any: score = sigmoid(hits - 0.5), hits = trigger occurrences.
/// All: score = sigmoid(present - (n - 0.5)), present = distinct triggers seen.
class TriggerClassifier final : public Classifier {
 public:
  TriggerClassifier(std::set<std::string, std::less<>> triggers, TriggerMode mode = TriggerMode::Any,
                    double threshold = 0.5);

  Prediction predict(std::span<const std::string> tokens) const override;
  std::string identity() const override;

  const std::set<std::string, std::less<>>& triggers() const { return triggers_; }
  TriggerMode mode() const { return mode_; }

 private:
  std::set<std::string, std::less<>> triggers_;
  TriggerMode mode_;
  double threshold_;
};

/// Reference classifier over adjacent token pairs: positive iff any listed
/// bigram occurs; score = sigmoid(hits - 0.5).
class BigramClassifier final : public Classifier {
 public:
  explicit BigramClassifier(std::set<std::pair<std::string, std::string>> bigrams, double threshold = 0.5);

  /// One "left right" pair per line, lexed with the code lexer.
  static BigramClassifier from_file(const std::string& path, double threshold = 0.5);

  Prediction predict(std::span<const std::string> tokens) const override;
  std::string identity() const override;

 private:
  std::set<std::pair<std::string, std::string>> bigrams_;
  double threshold_;
};

/// Reference mask filler: bigram model with unigram backoff, trained on
/// lines of code. For a masked slot with neighbours L and R the score of w is
/// P(w|L) * P(w|R), backing off to P(w|L), then P(w|R), then P(w), whichever
/// first has positive mass. Positions are decoded independently (tied
/// positions share one distribution, the normalized product of theirs) and
/// a joint candidate's likelihood is the product. Ties break on token text.
class NgramFiller final : public MaskFiller {
 public:
  explicit NgramFiller(std::span<const std::string> corpus_lines, const KeywordSet& keywords = default_keywords());
  static NgramFiller from_file(const std::string& path, const KeywordSet& keywords = default_keywords());

  std::vector<FillCandidate> fill_mask(const FillRequest& request) const override;
  std::string identity() const override;

  /// Normalized distribution for one slot, sorted by probability then text.
  /// Empty `left`/`right` means the neighbour is unknown (masked).
  std::vector<std::pair<std::string, double>> slot_distribution(std::string_view left, std::string_view right) const;

  std::size_t vocabulary_size() const { return unigram_.size(); }

 private:
  std::map<std::string, double, std::less<>> unigram_;
  double unigram_total_ = 0.0;
  // left -> (word -> count), right -> (word -> count)
  std::map<std::string, std::map<std::string, double>, std::less<>> after_;
  std::map<std::string, std::map<std::string, double>, std::less<>> before_;
  std::size_t line_count_ = 0;
  std::size_t fingerprint_ = 0;
};

inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";

}  // namespace cfex
