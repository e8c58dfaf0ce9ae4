#include "cfex/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include "cfex/error.hpp"

namespace cfex {

bool alignment(const Explanation& explanation, const Rationale& rationale, OverlapDenominator denominator) {
  std::set<int> indices = explanation.token_indices();
  std::size_t overlap = static_cast<std::size_t>(std::count_if(
      indices.begin(), indices.end(), [&](int i) { return rationale.attributed_indices.count(i) > 0; }));
  std::size_t denom =
      denominator == OverlapDenominator::Explanation ? indices.size() : rationale.attributed_indices.size();
  if (denom == 0) return false;
  return 2 * overlap >= denom;
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Win: return "Win";
    case Verdict::Loss: return "Loss";
    case Verdict::Tie: return "Tie";
  }
  return "Loss";
}

MethodStats method_stats(const RankedExplanations& ranked, int diff_size) {
  MethodStats s;
  s.count = ranked.total();
  s.diff_size = diff_size;
  if (!ranked.all_sizes.empty()) {
    auto [lo, hi] = std::minmax_element(ranked.all_sizes.begin(), ranked.all_sizes.end());
    s.min_size = *lo;
    s.max_size = *hi;
    s.avg_size = std::accumulate(ranked.all_sizes.begin(), ranked.all_sizes.end(), 0.0) /
                 static_cast<double>(ranked.all_sizes.size());
  }
  return s;
}

namespace {

MethodOutcome assess(const RankedExplanations& ranked, const Rationale& rationale, int diff_size,
                     OverlapDenominator denominator) {
  MethodOutcome m;
  m.method = ranked.method;
  m.stats = method_stats(ranked, diff_size);
  for (const Explanation& e : ranked.items) {
    if (!alignment(e, rationale, denominator)) continue;
    m.aligned = true;
    if (!m.best_aligned_size || e.size() < *m.best_aligned_size) m.best_aligned_size = e.size();
  }
  return m;
}

}  // namespace

ComparisonOutcome decide_win(const RankedExplanations& first, const RankedExplanations& second,
                             const Rationale& rationale, int diff_size, OverlapDenominator denominator) {
  ComparisonOutcome out;
  out.diff_id = rationale.diff_id;
  out.first = assess(first, rationale, diff_size, denominator);
  out.second = assess(second, rationale, diff_size, denominator);
  MethodOutcome& a = out.first;
  MethodOutcome& b = out.second;
  if (a.aligned && b.aligned) {
    if (*a.best_aligned_size == *b.best_aligned_size) {
      a.verdict = b.verdict = Verdict::Tie;
    } else {
      bool a_wins = *a.best_aligned_size < *b.best_aligned_size;
      a.verdict = a_wins ? Verdict::Win : Verdict::Loss;
      b.verdict = a_wins ? Verdict::Loss : Verdict::Win;
    }
  } else {
    a.verdict = a.aligned ? Verdict::Win : Verdict::Loss;
    b.verdict = b.aligned ? Verdict::Win : Verdict::Loss;
  }
  return out;
}

std::string format_stat(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  std::string s(buf);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

Report report_table(const std::vector<ComparisonOutcome>& outcomes) {
  if (outcomes.empty()) throw InvalidParams("report needs at least one outcome");
  std::ostringstream md;
  md << "| # | Diff | Method | # Exp | Size | Avg | Min | Max | Wins |\n";
  md << "|---|------|--------|-------|------|-----|-----|-----|------|\n";

  nlohmann::json rows = nlohmann::json::array();
  struct Tally {
    int wins = 0, ties = 0;
  };
  std::map<std::string, Tally> tally;
  std::vector<std::string> order;

  int row_no = 0;
  for (const ComparisonOutcome& o : outcomes) {
    ++row_no;
    bool first_row = true;
    for (const MethodOutcome* m : {&o.first, &o.second}) {
      std::string name(to_string(m->method));
      if (!tally.count(name)) order.push_back(name);
      Tally& t = tally[name];
      if (m->verdict == Verdict::Win) ++t.wins;
      if (m->verdict == Verdict::Tie) ++t.ties;
      bool marked = m->verdict != Verdict::Loss;

      md << "| " << (first_row ? std::to_string(row_no) : "") << " | " << (first_row ? o.diff_id : "") << " | "
         << name << " | ";
      if (m->stats.count == 0) {
        md << "- |  |  |  |  | " << (marked ? "x" : "") << " |\n";
      } else {
        md << m->stats.count << " | " << m->stats.diff_size << " | " << format_stat(*m->stats.avg_size) << " | "
           << *m->stats.min_size << " | " << *m->stats.max_size << " | " << (marked ? "x" : "") << " |\n";
      }
      first_row = false;

      nlohmann::json row{{"row", row_no},
                         {"diff_id", o.diff_id},
                         {"method", name},
                         {"num_explanations", m->stats.count},
                         {"diff_size", m->stats.diff_size},
                         {"avg_size", m->stats.avg_size ? nlohmann::json(*m->stats.avg_size) : nlohmann::json()},
                         {"min_size", m->stats.min_size ? nlohmann::json(*m->stats.min_size) : nlohmann::json()},
                         {"max_size", m->stats.max_size ? nlohmann::json(*m->stats.max_size) : nlohmann::json()},
                         {"aligned", m->aligned},
                         {"best_aligned_size",
                          m->best_aligned_size ? nlohmann::json(*m->best_aligned_size) : nlohmann::json()},
                         {"verdict", std::string(to_string(m->verdict))},
                         {"wins_marker", marked}};
      rows.push_back(std::move(row));
    }
  }

  const int total = static_cast<int>(outcomes.size());
  nlohmann::json summary = nlohmann::json::object();
  md << "\n";
  for (const std::string& name : order) {
    const Tally& t = tally[name];
    md << name << " wins-or-ties " << (t.wins + t.ties) << "/" << total << " (wins " << t.wins << ", ties "
       << t.ties << ")\n";
    summary[name] = {{"wins", t.wins},
                     {"ties", t.ties},
                     {"wins_or_ties", t.wins + t.ties},
                     {"total", total},
                     {"win_rate", static_cast<double>(t.wins) / total},
                     {"tie_rate", static_cast<double>(t.ties) / total},
                     {"wins_or_ties_rate", static_cast<double>(t.wins + t.ties) / total}};
  }

  Report r;
  r.markdown = md.str();
  r.json = {{"rows", rows}, {"summary", summary}};
  return r;
}

}  // namespace cfex
