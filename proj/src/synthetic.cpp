#include "cfex/synthetic.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <random>
#include <sstream>

#include "cfex/error.hpp"

namespace cfex {

namespace {

constexpr std::array<std::string_view, 24> kFillerNames = {
    "alpha", "beta",  "gamma",  "delta",  "item",   "count",  "value", "index",
    "buffer", "result", "node", "entry",  "total",  "limit",  "offset", "cursor",
    "state", "config", "task",  "queue",  "record", "width",  "height", "scale"};
constexpr std::array<std::string_view, 8> kTriggerNames = {"slowCall", "syncFetch",    "lockAll",  "deepCopy",
                                                           "busyWait", "blockingRead", "fullScan", "retryLoop"};
constexpr std::array<std::string_view, 6> kNeutralNames = {"fastCall",  "cachedFetch", "tryLock",
                                                           "shallowCopy", "asyncRead", "quickScan"};

// "$" is an identifier slot, "#" a number slot.
const std::vector<std::vector<std::string_view>> kTemplates = {
    {"$", "=", "$", "(", "$", ")", ";"},
    {"$", ".", "$", "(", "$", ",", "#", ")", ";"},
    {"if", "(", "$", "<", "$", ")", "{", "$", "(", ")", ";", "}"},
    {"return", "$", ";"},
    {"$", "+=", "#", ";"},
    {"$", "=", "$", "[", "#", "]", ";"},
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Plain modulo keeps the sequence identical across standard libraries.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string PlantedInstance::diff_text() const {
  std::string out;
  for (const DiffLine& line : diff.lines) {
    out += line.kind == LineKind::Added ? '+' : line.kind == LineKind::Deleted ? '-' : ' ';
    out += line.text;
    out += '\n';
  }
  return out;
}

TriggerClassifier PlantedInstance::classifier(double threshold) const {
  return TriggerClassifier(std::set<std::string, std::less<>>(triggers.begin(), triggers.end()), TriggerMode::Any,
                           threshold);
}

NgramFiller PlantedInstance::filler() const { return NgramFiller(fill_corpus); }

std::set<int> PlantedInstance::trigger_groups(const TokenizedProgram& program) const {
  std::set<int> out;
  for (const auto& g : program.groups()) {
    if (std::find(triggers.begin(), triggers.end(), g.canonical_text) != triggers.end()) out.insert(g.group_id);
  }
  return out;
}

Rationale PlantedInstance::rationale(const TokenizedProgram& program, std::string diff_id) const {
  Rationale r;
  r.diff_id = std::move(diff_id);
  for (int gid : trigger_groups(program)) {
    const auto& members = program.group(gid).member_indices;
    r.attributed_indices.insert(members.begin(), members.end());
  }
  return r;
}

nlohmann::json PlantedInstance::sidecar() const {
  return {{"seed", seed},
          {"n_tokens", n_tokens},
          {"n_triggers", static_cast<int>(triggers.size())},
          {"triggers", triggers},
          {"trigger_mode", "any"},
          {"neutral_vocab", neutral_vocab},
          {"expected_min_size", expected_min_size},
          {"fill_corpus", fill_corpus}};
}

PlantedInstance generate_instance(std::uint64_t seed, int n_tokens, int n_triggers) {
  if (n_triggers < 1 || n_triggers > 3) throw InvalidParams("n_triggers must be in [1,3]");
  if (n_tokens < 10 * n_triggers) throw InvalidParams("n_tokens must be at least 10 * n_triggers");

  Rng rng(seed);
  PlantedInstance inst;
  inst.seed = seed;
  inst.n_tokens = n_tokens;

  std::vector<std::string_view> trig(kTriggerNames.begin(), kTriggerNames.end());
  rng.shuffle(trig);
  for (int i = 0; i < n_triggers; ++i) inst.triggers.emplace_back(trig[static_cast<std::size_t>(i)]);
  std::vector<std::string_view> neutral(kNeutralNames.begin(), kNeutralNames.end());
  rng.shuffle(neutral);
  for (int i = 0; i < 3; ++i) inst.neutral_vocab.emplace_back(neutral[static_cast<std::size_t>(i)]);
  inst.expected_min_size = n_triggers;

  // Lines of token texts; identifier slots remembered for planting.
  std::vector<std::vector<std::string>> lines;
  std::vector<LineKind> kinds;
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  int produced = 0;
  while (produced < n_tokens) {
    const auto& tmpl = kTemplates[rng.below(kTemplates.size())];
    std::vector<std::string> toks;
    for (std::string_view piece : tmpl) {
      if (piece == "$") {
        slots.emplace_back(lines.size(), toks.size());
        toks.emplace_back(kFillerNames[rng.below(kFillerNames.size())]);
      } else if (piece == "#") {
        toks.push_back(std::to_string(rng.below(100)));
      } else {
        toks.emplace_back(piece);
      }
    }
    produced += static_cast<int>(toks.size());
    std::size_t r = rng.below(10);
    kinds.push_back(r < 4 ? LineKind::Context : r < 8 ? LineKind::Added : LineKind::Deleted);
    lines.push_back(std::move(toks));
  }

  // Every trigger gets one slot; the first gets a second occurrence, the
  // others one more with probability 1/2, while slots last.
  rng.shuffle(slots);
  std::size_t next_slot = 0;
  for (int t = 0; t < n_triggers; ++t) {
    std::size_t occurrences = (t == 0 || rng.below(2) == 0) ? 2 : 1;
    for (std::size_t o = 0; o < occurrences && next_slot < slots.size(); ++o) {
      if (o > 0 && slots.size() - next_slot <= static_cast<std::size_t>(n_triggers - t - 1)) break;
      auto [li, ti] = slots[next_slot++];
      lines[li][ti] = inst.triggers[static_cast<std::size_t>(t)];
    }
  }

  int line_no = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    inst.diff.lines.push_back({kinds[i], join(lines[i]), ++line_no});
  }
  inst.diff.source_name = "planted-" + std::to_string(seed);

  for (const auto& toks : lines) {
    inst.fill_corpus.push_back(join(toks));
    bool has_trigger = std::any_of(toks.begin(), toks.end(), [&](const std::string& s) {
      return std::find(inst.triggers.begin(), inst.triggers.end(), s) != inst.triggers.end();
    });
    if (!has_trigger) continue;
    for (std::size_t v = 0; v < inst.neutral_vocab.size(); ++v) {
      std::vector<std::string> variant = toks;
      for (auto& s : variant) {
        auto it = std::find(inst.triggers.begin(), inst.triggers.end(), s);
        if (it == inst.triggers.end()) continue;
        auto t = static_cast<std::size_t>(it - inst.triggers.begin());
        s = inst.neutral_vocab[(t + v) % inst.neutral_vocab.size()];
      }
      inst.fill_corpus.push_back(join(variant));
    }
  }
  return inst;
}

std::filesystem::path sidecar_path(const std::filesystem::path& diff_path) {
  auto p = diff_path;
  p.replace_extension(".instance.json");
  return p;
}

void write_instance(const std::filesystem::path& dir, const std::string& id, const PlantedInstance& instance) {
  std::filesystem::create_directories(dir);
  auto diff_path = dir / (id + ".diff");
  {
    std::ofstream out(diff_path, std::ios::binary);
    if (!out) throw Error("cannot write " + diff_path.string());
    out << instance.diff_text();
  }
  std::ofstream out(sidecar_path(diff_path), std::ios::binary);
  if (!out) throw Error("cannot write sidecar for " + diff_path.string());
  out << instance.sidecar().dump(2) << "\n";
}

PlantedInstance read_instance(const std::filesystem::path& diff_path) {
  PlantedInstance inst;
  inst.diff = parse_diff(read_file(diff_path), diff_path.filename().string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(sidecar_path(diff_path)));
    inst.seed = j.value("seed", std::uint64_t{0});
    inst.n_tokens = j.value("n_tokens", 0);
    inst.triggers = j.at("triggers").get<std::vector<std::string>>();
    inst.neutral_vocab = j.value("neutral_vocab", std::vector<std::string>{});
    inst.expected_min_size = j.value("expected_min_size", static_cast<int>(inst.triggers.size()));
    inst.fill_corpus = j.value("fill_corpus", std::vector<std::string>{});
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid sidecar for " + diff_path.string() + ": " + e.what());
  }
  return inst;
}

std::set<Substitution> brute_force_oracle(const TokenizedProgram& program, const Classifier& classifier,
                                          const MaskFiller& filler, int max_size, int mlm_k, bool minimal_only) {
  if (max_size < 1 || max_size > 2) throw InvalidParams("oracle max_size must be 1 or 2");
  if (program.groups().size() > kOracleMaxGroups) {
    throw TooLarge("instance has " + std::to_string(program.groups().size()) + " groups; oracle limit is " +
                   std::to_string(kOracleMaxGroups));
  }
  const bool original_label = predict(classifier, program).label;
  const auto texts = program.texts();
  const int n = static_cast<int>(program.groups().size());

  // Flipping substitutions for exactly this domain.
  auto flips_for = [&](const std::vector<int>& domain) {
    FillRequest req;
    req.tokens = texts;
    for (int gid : domain) {
      const auto& members = program.group(gid).member_indices;
      for (int m : members) {
        req.mask_positions.push_back(m);
        req.tokens[static_cast<std::size_t>(m)] = std::string(kMaskToken);
      }
      if (members.size() > 1) req.tied_positions.push_back(members);
    }
    std::sort(req.mask_positions.begin(), req.mask_positions.end());
    // one maximal request; the search widens step by step to the same cap
    req.k = fill_request_cap(mlm_k);

    std::vector<Substitution> proposals;
    for (const FillCandidate& c : filler.fill_mask(req)) {
      Substitution s;
      bool changed = true, ok = true;
      for (int gid : domain) {
        const auto& g = program.group(gid);
        auto pos = std::find(req.mask_positions.begin(), req.mask_positions.end(), g.member_indices.front());
        const std::string& text = c.replacements.at(static_cast<std::size_t>(pos - req.mask_positions.begin()));
        ok = ok && is_valid_replacement(text) && text != kMaskToken;
        changed = changed && text != g.canonical_text;
        s[gid] = text;
      }
      if (!ok || !changed || std::find(proposals.begin(), proposals.end(), s) != proposals.end()) continue;
      proposals.push_back(std::move(s));
      if (static_cast<int>(proposals.size()) == mlm_k) break;
    }

    std::vector<Substitution> flips;
    for (const Substitution& s : proposals) {
      if (predict(classifier, apply_substitution(program, s)).label != original_label) flips.push_back(s);
    }
    return flips;
  };

  std::set<Substitution> out;
  std::set<int> flipping_singletons;
  for (int a = 0; a < n; ++a) {
    auto flips = flips_for({a});
    if (!flips.empty()) flipping_singletons.insert(a);
    out.insert(flips.begin(), flips.end());
  }
  if (max_size == 2) {
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (minimal_only && (flipping_singletons.count(a) || flipping_singletons.count(b))) continue;
        auto flips = flips_for({a, b});
        out.insert(flips.begin(), flips.end());
      }
    }
  }
  return out;
}

}  // namespace cfex
