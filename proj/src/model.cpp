#include "cfex/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cfex/error.hpp"

namespace cfex {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::size_t fnv1a(std::string_view data, std::size_t seed = 1469598103934665603ULL) {
  std::size_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex(std::size_t v) {
  std::ostringstream os;
  os << std::hex << v;
  return os.str();
}

using Distribution = std::vector<std::pair<std::string, double>>;

void sort_distribution(Distribution& dist) {
  std::sort(dist.begin(), dist.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
}

Distribution normalized(std::map<std::string, double> scores) {
  double total = 0.0;
  for (const auto& [w, s] : scores) total += s;
  Distribution out;
  if (total <= 0.0) return out;
  for (auto& [w, s] : scores) {
    if (s > 0.0) out.emplace_back(w, s / total);
  }
  sort_distribution(out);
  return out;
}

}  // namespace

void FillRequest::validate() const {
  if (k < 1) throw InvalidParams("fill request k must be >= 1");
  if (mask_positions.empty()) throw InvalidParams("fill request has no mask positions");
  for (std::size_t i = 0; i < mask_positions.size(); ++i) {
    int p = mask_positions[i];
    if (p < 0 || static_cast<std::size_t>(p) >= tokens.size())
      throw InvalidParams("mask position out of range: " + std::to_string(p));
    if (i > 0 && mask_positions[i - 1] >= p) throw InvalidParams("mask positions must strictly increase");
    if (tokens[static_cast<std::size_t>(p)] != kMaskToken)
      throw InvalidParams("mask position " + std::to_string(p) + " does not hold the mask token");
  }
  for (const auto& tie : tied_positions) {
    for (int p : tie) {
      if (!std::binary_search(mask_positions.begin(), mask_positions.end(), p))
        throw InvalidParams("tied position " + std::to_string(p) + " is not masked");
    }
  }
}

Prediction predict(const Classifier& classifier, const TokenizedProgram& program) {
  if (program.empty()) throw EmptyInput("cannot classify an empty program");
  auto texts = program.texts();
  return classifier.predict(texts);
}

std::vector<GroupFill> fill_groups(const TokenizedProgram& program, const MaskFiller& filler,
                                   std::span<const int> group_ids, int k) {
  if (group_ids.empty()) throw InvalidParams("fill_groups needs at least one group");
  if (k < 1) throw InvalidParams("k must be >= 1");

  FillRequest request;
  request.tokens = program.texts();
  for (int gid : group_ids) {
    const auto& members = program.group(gid).member_indices;
    request.mask_positions.insert(request.mask_positions.end(), members.begin(), members.end());
    if (members.size() > 1) request.tied_positions.push_back(members);
  }
  std::sort(request.mask_positions.begin(), request.mask_positions.end());
  for (int p : request.mask_positions) request.tokens[static_cast<std::size_t>(p)] = std::string(kMaskToken);

  std::vector<std::size_t> slot_of_group;
  for (int gid : group_ids) {
    int first = program.group(gid).member_indices.front();
    auto it = std::lower_bound(request.mask_positions.begin(), request.mask_positions.end(), first);
    slot_of_group.push_back(static_cast<std::size_t>(it - request.mask_positions.begin()));
  }

  // Fills that keep some group unchanged are useless here, and with several
  // groups they can crowd out the rest, so ask again with a wider window.
  const int cap = fill_request_cap(k);
  std::vector<GroupFill> out;
  for (request.k = k + 1;; request.k = std::min(request.k * 4, cap)) {
    auto candidates = filler.fill_mask(request);
    out.clear();
    std::set<Substitution> seen;
    for (const FillCandidate& cand : candidates) {
      if (cand.replacements.size() != request.mask_positions.size())
        throw MalformedResponse("fill candidate has " + std::to_string(cand.replacements.size()) +
                                " replacements for " + std::to_string(request.mask_positions.size()) + " masks");
      GroupFill fill;
      fill.likelihood = cand.likelihood;
      bool usable = true;
      for (std::size_t i = 0; i < group_ids.size(); ++i) {
        const std::string& text = cand.replacements[slot_of_group[i]];
        if (!is_valid_replacement(text) || text == kMaskToken) usable = false;
        if (text == program.group(group_ids[i]).canonical_text) usable = false;
        fill.substitution.emplace(group_ids[i], text);
      }
      if (!usable || !seen.insert(fill.substitution).second) continue;
      out.push_back(std::move(fill));
      if (static_cast<int>(out.size()) == k) break;
    }
    bool exhausted = static_cast<int>(candidates.size()) < request.k;
    if (static_cast<int>(out.size()) == k || exhausted || request.k >= cap) break;
  }
  return out;
}

TriggerClassifier::TriggerClassifier(std::set<std::string, std::less<>> triggers, TriggerMode mode, double threshold)
    : triggers_(std::move(triggers)), mode_(mode), threshold_(threshold) {}

Prediction TriggerClassifier::predict(std::span<const std::string> tokens) const {
  if (mode_ == TriggerMode::Any) {
    std::size_t hits = 0;
    for (const auto& t : tokens) hits += triggers_.count(t);
    return Prediction::from_score(sigmoid(static_cast<double>(hits) - 0.5), threshold_);
  }
  std::set<std::string_view> present;
  for (const auto& t : tokens) {
    if (triggers_.count(t)) present.insert(t);
  }
  double n = static_cast<double>(triggers_.size());
  return Prediction::from_score(sigmoid(static_cast<double>(present.size()) - (n - 0.5)), threshold_);
}

std::string TriggerClassifier::identity() const {
  std::string joined;
  for (const auto& t : triggers_) joined += t + ",";
  return std::string("builtin:trigger[") + (mode_ == TriggerMode::Any ? "any" : "all") + "]#" +
         hex(fnv1a(joined));
}

BigramClassifier::BigramClassifier(std::set<std::pair<std::string, std::string>> bigrams, double threshold)
    : bigrams_(std::move(bigrams)), threshold_(threshold) {}

BigramClassifier BigramClassifier::from_file(const std::string& path, double threshold) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read bigram file: " + path);
  std::set<std::pair<std::string, std::string>> bigrams;
  std::string line;
  while (std::getline(in, line)) {
    auto lexemes = lex_line(line);
    if (lexemes.empty() || lexemes.front().text == "#") continue;
    if (lexemes.size() != 2) throw Error("bigram file line must hold exactly two tokens: " + line);
    bigrams.emplace(lexemes[0].text, lexemes[1].text);
  }
  return BigramClassifier(std::move(bigrams), threshold);
}

Prediction BigramClassifier::predict(std::span<const std::string> tokens) const {
  std::size_t hits = 0;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    if (bigrams_.count({tokens[i - 1], tokens[i]})) ++hits;
  }
  return Prediction::from_score(sigmoid(static_cast<double>(hits) - 0.5), threshold_);
}

std::string BigramClassifier::identity() const {
  std::string joined;
  for (const auto& [a, b] : bigrams_) joined += a + " " + b + ",";
  return "builtin:ngram-classifier#" + hex(fnv1a(joined));
}

NgramFiller::NgramFiller(std::span<const std::string> corpus_lines, const KeywordSet& keywords) {
  std::size_t fp = fnv1a("");
  for (const std::string& line : corpus_lines) {
    fp = fnv1a(line + "\n", fp);
    auto lexemes = lex_line(line, keywords);
    if (lexemes.empty()) continue;
    ++line_count_;
    std::string prev(kBos);
    for (const Lexeme& lx : lexemes) {
      unigram_[lx.text] += 1.0;
      unigram_total_ += 1.0;
      after_[prev][lx.text] += 1.0;
      if (prev != kBos) before_[lx.text][prev] += 1.0;
      prev = lx.text;
    }
    before_[std::string(kEos)][prev] += 1.0;
  }
  fingerprint_ = fp;
}

NgramFiller NgramFiller::from_file(const std::string& path, const KeywordSet& keywords) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read corpus file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return NgramFiller(lines, keywords);
}

std::string NgramFiller::identity() const {
  return "builtin:ngram[lines=" + std::to_string(line_count_) + "]#" + hex(fingerprint_);
}

std::vector<std::pair<std::string, double>> NgramFiller::slot_distribution(std::string_view left,
                                                                           std::string_view right) const {
  const std::map<std::string, double>* lctx = nullptr;
  const std::map<std::string, double>* rctx = nullptr;
  if (!left.empty()) {
    auto it = after_.find(left);
    if (it != after_.end()) lctx = &it->second;
  }
  if (!right.empty()) {
    auto it = before_.find(right);
    if (it != before_.end()) rctx = &it->second;
  }
  auto total = [](const std::map<std::string, double>& m) {
    double t = 0.0;
    for (const auto& [w, c] : m) t += c;
    return t;
  };

  if (lctx && rctx) {
    double lt = total(*lctx), rt = total(*rctx);
    std::map<std::string, double> scores;
    for (const auto& [w, c] : *lctx) {
      auto r = rctx->find(w);
      if (r != rctx->end() && lt > 0 && rt > 0) scores[w] = (c / lt) * (r->second / rt);
    }
    auto dist = normalized(std::move(scores));
    if (!dist.empty()) return dist;
  }
  for (const auto* ctx : {lctx, rctx}) {
    if (!ctx) continue;
    auto dist = normalized(std::map<std::string, double>(ctx->begin(), ctx->end()));
    if (!dist.empty()) return dist;
  }
  return normalized(std::map<std::string, double>(unigram_.begin(), unigram_.end()));
}

std::vector<FillCandidate> NgramFiller::fill_mask(const FillRequest& request) const {
  request.validate();
  const auto& tokens = request.tokens;
  const auto& masks = request.mask_positions;
  const std::size_t K = static_cast<std::size_t>(request.k);

  auto neighbour = [&](long p) -> std::string_view {
    if (p < 0) return kBos;
    if (static_cast<std::size_t>(p) >= tokens.size()) return kEos;
    if (tokens[static_cast<std::size_t>(p)] == kMaskToken) return {};
    return tokens[static_cast<std::size_t>(p)];
  };

  // Variables: tied sets first claim their positions, the rest stay single.
  std::vector<std::vector<std::size_t>> variables;  // slots into `masks`
  std::vector<int> owner(masks.size(), -1);
  for (const auto& tie : request.tied_positions) {
    std::vector<std::size_t> slots;
    for (int p : tie) {
      auto slot = static_cast<std::size_t>(std::lower_bound(masks.begin(), masks.end(), p) - masks.begin());
      if (owner[slot] == -1) slots.push_back(slot);
    }
    if (slots.empty()) continue;
    std::sort(slots.begin(), slots.end());
    for (auto s : slots) owner[s] = static_cast<int>(variables.size());
    variables.push_back(std::move(slots));
  }
  for (std::size_t s = 0; s < masks.size(); ++s) {
    if (owner[s] == -1) {
      owner[s] = static_cast<int>(variables.size());
      variables.push_back({s});
    }
  }
  std::sort(variables.begin(), variables.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });

  std::vector<Distribution> options;
  for (const auto& slots : variables) {
    std::vector<Distribution> per_slot;
    for (auto s : slots) {
      long p = masks[s];
      per_slot.push_back(slot_distribution(neighbour(p - 1), neighbour(p + 1)));
    }
    Distribution dist;
    if (per_slot.size() == 1) {
      dist = std::move(per_slot.front());
    } else {
      std::map<std::string, double> product, mean;
      std::map<std::string, int> seen;
      for (const auto& d : per_slot) {
        for (const auto& [w, pr] : d) {
          mean[w] += pr / static_cast<double>(per_slot.size());
          seen[w] += 1;
          product.try_emplace(w, 1.0);
          product[w] *= pr;
        }
      }
      for (auto& [w, pr] : product) {
        if (seen[w] != static_cast<int>(per_slot.size())) pr = 0.0;
      }
      dist = normalized(std::move(product));
      if (dist.empty()) dist = normalized(std::move(mean));
    }
    if (dist.size() > K) dist.resize(K);
    options.push_back(std::move(dist));
  }

  // Exact top-K of the product over independent variables.
  struct Partial {
    std::vector<std::string> texts;
    double p;
  };
  std::vector<Partial> beam{{{}, 1.0}};
  for (const auto& dist : options) {
    std::vector<Partial> next;
    for (const auto& part : beam) {
      for (const auto& [w, pr] : dist) {
        Partial ext = part;
        ext.texts.push_back(w);
        ext.p *= pr;
        next.push_back(std::move(ext));
      }
    }
    std::sort(next.begin(), next.end(), [](const Partial& a, const Partial& b) {
      if (a.p != b.p) return a.p > b.p;
      return a.texts < b.texts;
    });
    if (next.size() > K) next.resize(K);
    beam = std::move(next);
  }

  std::vector<FillCandidate> out;
  for (auto& part : beam) {
    if (part.texts.size() != variables.size()) continue;  // some variable had no options
    FillCandidate cand;
    cand.replacements.resize(masks.size());
    for (std::size_t v = 0; v < variables.size(); ++v) {
      for (auto s : variables[v]) cand.replacements[s] = part.texts[v];
    }
    cand.likelihood = part.p;
    out.push_back(std::move(cand));
  }
  return out;
}

}  // namespace cfex
