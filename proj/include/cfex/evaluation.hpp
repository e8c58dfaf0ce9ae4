#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "cfex/ranking.hpp"

namespace cfex {

/// Human-attributed token indices for one diff.
struct Rationale {
  std::string diff_id;
  std::set<int> attributed_indices;
};

enum class OverlapDenominator {
  Explanation,  // |E ∩ R| / |E|
  Rationale,    // |E ∩ R| / |R|
};

/// Overlap of at least 50% (inclusive).
bool alignment(const Explanation& explanation, const Rationale& rationale,
               OverlapDenominator denominator = OverlapDenominator::Explanation);

enum class Verdict { Win, Loss, Tie };
std::string_view to_string(Verdict verdict);

struct MethodStats {
  int count = 0;      // explanations found (before top-k truncation)
  int diff_size = 0;  // tokens in the diff
  std::optional<double> avg_size;
  std::optional<int> min_size;
  std::optional<int> max_size;
};

MethodStats method_stats(const RankedExplanations& ranked, int diff_size);

struct MethodOutcome {
  Method method = Method::CFEX;
  Verdict verdict = Verdict::Loss;
  bool aligned = false;
  std::optional<int> best_aligned_size;
  MethodStats stats;
};

struct ComparisonOutcome {
  std::string diff_id;
  MethodOutcome first;   // usually CFEX
  MethodOutcome second;  // usually SEDC
};

/// A method is aligned when any of its listed (top-k) explanations aligns.
/// Only aligned methods can win; two aligned methods compare their smallest
/// aligned explanation, and equal sizes tie. Neither aligned: both lose.
ComparisonOutcome decide_win(const RankedExplanations& first, const RankedExplanations& second,
                             const Rationale& rationale, int diff_size,
                             OverlapDenominator denominator = OverlapDenominator::Explanation);

struct Report {
  std::string markdown;
  nlohmann::json json;
};

/// Overview table with one row per diff per method (# Exp, Size, Avg, Min,
/// Max, Wins) plus win/tie summaries. Throws InvalidParams when empty.
Report report_table(const std::vector<ComparisonOutcome>& outcomes);

/// Two decimals at most, trailing zeros dropped: 4, 4.5, 3.83.
std::string format_stat(double value);

}  // namespace cfex
