#include "cfex/json_io.hpp"

#include <fstream>

#include "cfex/error.hpp"

namespace cfex {

json to_json(const TokenizedProgram& program) {
  json tokens = json::array();
  for (const Token& t : program.tokens()) {
    tokens.push_back({{"index", t.index},
                      {"text", t.text},
                      {"kind", std::string(to_string(t.kind))},
                      {"line_no", t.line_no},
                      {"col", t.col},
                      {"line_kind", std::string(to_string(t.line_kind))}});
  }
  json groups = json::array();
  for (const ConsistencyGroup& g : program.groups()) {
    groups.push_back({{"group_id", g.group_id}, {"members", g.member_indices}, {"text", g.canonical_text}});
  }
  return {{"tokens", tokens}, {"groups", groups}};
}

json to_json(const Explanation& explanation, std::optional<int> rank) {
  json subs = json::array();
  for (const auto& e : explanation.entries) {
    subs.push_back({{"group_id", e.group_id},
                    {"original", e.original},
                    {"replacement", e.replacement ? json(*e.replacement) : json()},
                    {"member_indices", e.member_indices}});
  }
  json j{{"method", std::string(to_string(explanation.method))},
         {"size", explanation.size()},
         {"flipped_score", explanation.flipped_score},
         {"substitutions", subs}};
  if (rank) j["rank"] = *rank;
  return j;
}

json to_json(const RankedExplanations& ranked) {
  json arr = json::array();
  int r = 0;
  for (const auto& e : ranked.items) arr.push_back(to_json(e, ++r));
  return arr;
}

json to_json(const Rationale& rationale) {
  return {{"diff_id", rationale.diff_id}, {"attributed_indices", rationale.attributed_indices}};
}

Rationale rationale_from_json(const json& j) {
  try {
    Rationale r;
    r.diff_id = j.at("diff_id").get<std::string>();
    for (int i : j.at("attributed_indices").get<std::vector<int>>()) {
      if (i < 0) throw Error("negative token index in rationale");
      r.attributed_indices.insert(i);
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("invalid rationale: ") + e.what());
  }
}

Rationale read_rationale(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read rationale " + path.string());
  try {
    return rationale_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw Error("invalid rationale JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace cfex
