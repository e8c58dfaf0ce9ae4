#include "cfex/cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "cfex/diff.hpp"
#include "cfex/error.hpp"
#include "cfex/evaluation.hpp"
#include "cfex/json_io.hpp"
#include "cfex/model.hpp"
#include "cfex/ranking.hpp"
#include "cfex/search.hpp"
#include "cfex/sedc.hpp"
#include "cfex/synthetic.hpp"
#include "cfex/wire.hpp"

namespace fs = std::filesystem;

namespace cfex::cli {

namespace {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct Options {
  // adapters
  std::string classifier = "builtin:trigger";
  std::string filler = "builtin:ngram";
  std::string triggers_file;
  std::string trigger_mode = "any";
  std::string corpus_file;
  std::string keywords_file;
  int timeout_ms = 30000;
  // search
  SearchConfig search;
  int stop_after = 0;  // 0 = unbounded
  int top = kDefaultTopK;
};

std::string timestamp_utc() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

std::set<std::string, std::less<>> read_word_list(const fs::path& path) {
  std::set<std::string, std::less<>> out;
  std::istringstream in(read_text(path));
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t\r");
    out.insert(line.substr(b, e - b + 1));
  }
  return out;
}

void add_adapter_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--classifier", o.classifier,
                  "builtin:trigger | builtin:ngram-classifier | proc:<command> | tcp:<host:port>")
      ->capture_default_str();
  cmd->add_option("--filler", o.filler, "builtin:ngram | proc:<command> | tcp:<host:port>")->capture_default_str();
  cmd->add_option("--triggers", o.triggers_file,
                  "trigger word list (builtin:trigger) or bigram list (builtin:ngram-classifier)");
  cmd->add_option("--trigger-mode", o.trigger_mode, "any | all")
      ->check(CLI::IsMember({"any", "all"}))
      ->capture_default_str();
  cmd->add_option("--fill-corpus", o.corpus_file, "training lines for builtin:ngram");
  cmd->add_option("--keywords", o.keywords_file, "keyword list, one per line");
  cmd->add_option("--threshold", o.search.decision_threshold, "decision threshold")->capture_default_str();
  cmd->add_option("--timeout-ms", o.timeout_ms, "remote adapter response timeout")->capture_default_str();
}

void add_search_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--max-size", o.search.max_explanation_size, "largest explanation, in groups")
      ->capture_default_str();
  cmd->add_option("--iterations", o.search.max_iterations, "search iterations after the singleton round")
      ->capture_default_str();
  cmd->add_option("--mlm-k", o.search.mlm_k, "fill candidates per query")->capture_default_str();
  cmd->add_option("--stop-after", o.stop_after, "stop after this many explanations (0 = no limit)")
      ->capture_default_str();
  cmd->add_option("--threads", o.search.threads, "worker threads per search iteration")->capture_default_str();
  cmd->add_option("--top", o.top, "explanations kept per method")->capture_default_str();
}

SearchConfig effective_search(const Options& o) {
  SearchConfig cfg = o.search;
  if (o.stop_after > 0) cfg.stop_after = o.stop_after;
  try {
    cfg.validate();
  } catch (const InvalidParams& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

json options_json(const Options& o, const SearchConfig& cfg) {
  return {{"classifier", o.classifier},
          {"filler", o.filler},
          {"triggers", o.triggers_file},
          {"trigger_mode", o.trigger_mode},
          {"fill_corpus", o.corpus_file},
          {"keywords", o.keywords_file},
          {"threshold", cfg.decision_threshold},
          {"max_size", cfg.max_explanation_size},
          {"iterations", cfg.max_iterations},
          {"mlm_k", cfg.mlm_k},
          {"stop_after", cfg.stop_after ? json(*cfg.stop_after) : json()},
          {"threads", cfg.threads},
          {"top", o.top}};
}

/// Builds adapters for one diff. Remote endpoints are opened once, pinged,
/// and reused across diffs.
class AdapterFactory {
 public:
  AdapterFactory(const Options& options, std::ostream& log) : options_(options), log_(log) {}

  struct Pair {
    std::unique_ptr<Classifier> classifier;
    std::unique_ptr<MaskFiller> filler;
  };

  Pair make(const fs::path& diff_path, bool need_filler, const KeywordSet& keywords) {
    Pair p;
    p.classifier = make_classifier(diff_path);
    if (need_filler) p.filler = make_filler(diff_path, keywords);
    return p;
  }

 private:
  std::shared_ptr<wire::RemoteEndpoint> endpoint(const std::string& spec) {
    if (auto it = endpoints_.find(spec); it != endpoints_.end()) return it->second;
    std::unique_ptr<wire::LineTransport> transport;
    auto timeout = std::chrono::milliseconds(options_.timeout_ms);
    if (spec.rfind("proc:", 0) == 0) {
      std::string cmd = spec.substr(5);
      if (cmd.empty()) throw ConfigError("proc: adapter needs a command");
      transport = std::make_unique<wire::ProcessTransport>(cmd, timeout);
    } else {
      std::string target = spec.substr(4);
      auto colon = target.rfind(':');
      if (colon == std::string::npos || colon == 0) throw ConfigError("tcp adapter must be tcp:<host>:<port>");
      int port = 0;
      try {
        port = std::stoi(target.substr(colon + 1));
      } catch (const std::exception&) {
        throw ConfigError("invalid port in " + spec);
      }
      transport = std::make_unique<wire::TcpTransport>(target.substr(0, colon), port, timeout);
    }
    auto ep = std::make_shared<wire::RemoteEndpoint>(std::move(transport));
    wire::PingInfo info;
    try {
      info = ep->ping();
    } catch (const MalformedResponse& e) {
      throw AdapterUnavailable(spec + ": ping failed: " + e.what());
    }
    log_ << "[cfex] connected to " << spec << (info.serial ? " (serial)" : "") << "\n";
    endpoints_.emplace(spec, ep);
    return ep;
  }

  static bool is_remote(const std::string& spec) { return spec.rfind("proc:", 0) == 0 || spec.rfind("tcp:", 0) == 0; }

  const PlantedInstance& sidecar(const fs::path& diff_path) {
    auto key = diff_path.string();
    if (auto it = sidecars_.find(key); it != sidecars_.end()) return it->second;
    if (!fs::exists(sidecar_path(diff_path))) {
      throw ConfigError("builtin adapter needs --triggers/--fill-corpus or a sidecar " + sidecar_path(diff_path).string());
    }
    try {
      return sidecars_.emplace(key, read_instance(diff_path)).first->second;
    } catch (const EmptyInput&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }

  std::unique_ptr<Classifier> make_classifier(const fs::path& diff_path) {
    const std::string& spec = options_.classifier;
    double threshold = options_.search.decision_threshold;
    if (is_remote(spec)) return std::make_unique<wire::RemoteClassifier>(endpoint(spec), threshold);
    if (spec == "builtin:trigger") {
      auto mode = options_.trigger_mode == "all" ? TriggerMode::All : TriggerMode::Any;
      if (!options_.triggers_file.empty()) {
        return std::make_unique<TriggerClassifier>(read_word_list(options_.triggers_file), mode, threshold);
      }
      return std::make_unique<TriggerClassifier>(sidecar(diff_path).classifier(threshold));
    }
    if (spec == "builtin:ngram-classifier") {
      if (options_.triggers_file.empty()) throw ConfigError("builtin:ngram-classifier needs --triggers <bigram file>");
      try {
        return std::make_unique<BigramClassifier>(BigramClassifier::from_file(options_.triggers_file, threshold));
      } catch (const Error& e) {
        throw ConfigError(e.what());
      }
    }
    throw ConfigError("unknown classifier spec: " + spec);
  }

  std::unique_ptr<MaskFiller> make_filler(const fs::path& diff_path, const KeywordSet& keywords) {
    const std::string& spec = options_.filler;
    if (is_remote(spec)) return std::make_unique<wire::RemoteFiller>(endpoint(spec));
    if (spec == "builtin:ngram") {
      if (!options_.corpus_file.empty()) {
        if (!fs::exists(options_.corpus_file)) throw ConfigError("cannot read corpus " + options_.corpus_file);
        return std::make_unique<NgramFiller>(NgramFiller::from_file(options_.corpus_file, keywords));
      }
      return std::make_unique<NgramFiller>(sidecar(diff_path).fill_corpus, keywords);
    }
    throw ConfigError("unknown filler spec: " + spec);
  }

  const Options& options_;
  std::ostream& log_;
  std::map<std::string, std::shared_ptr<wire::RemoteEndpoint>> endpoints_;
  std::map<std::string, PlantedInstance> sidecars_;
};

KeywordSet keywords_for(const Options& o) {
  if (o.keywords_file.empty()) return default_keywords();
  try {
    return load_keywords(o.keywords_file);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

TokenizedProgram load_program(const fs::path& diff_path, const KeywordSet& keywords) {
  return tokenize(parse_diff(read_text(diff_path), diff_path.filename().string()), keywords);
}

using Clock = std::chrono::steady_clock;
double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<Explanation> run_cfex(const TokenizedProgram& program, AdapterFactory::Pair& adapters,
                                  const SearchConfig& cfg) {
  return generate_explanations(program, *adapters.classifier, *adapters.filler, cfg);
}

std::vector<Explanation> run_sedc(const TokenizedProgram& program, const Classifier& classifier,
                                  const SearchConfig& cfg) {
  std::vector<Explanation> out;
  for (const auto& r : sedc_explain(program, classifier, cfg)) out.push_back(r.to_explanation(program));
  return out;
}

// ---------------------------------------------------------------- explain

struct ExplainArgs {
  std::string diff;
  std::string out;
  std::string manifest;
  std::string method = "cfex";
  bool added_lines_only = false;
};

int cmd_explain(const Options& o, const ExplainArgs& a, const std::vector<std::string>& argv, std::ostream& log) {
  SearchConfig cfg = effective_search(o);
  KeywordSet keywords = keywords_for(o);
  auto t0 = Clock::now();
  TokenizedProgram program = load_program(a.diff, keywords);
  double parse_ms = ms_since(t0);

  const bool want_cfex = a.method != "sedc";
  const bool want_sedc = a.method != "cfex";
  AdapterFactory factory(o, log);
  auto adapters = factory.make(a.diff, want_cfex, keywords);
  Prediction original = predict(*adapters.classifier, program);
  log << "[cfex] " << program.size() << " tokens, " << program.groups().size() << " groups; prediction "
      << (original.label ? "positive" : "negative") << " (" << original.score << ")\n";

  json explanations = json::object();
  json totals = json::object();
  json timings{{"parse_ms", parse_ms}};
  auto emit = [&](Method method, std::vector<Explanation> found, double ms) {
    if (a.added_lines_only) {
      std::erase_if(found, [&](const Explanation& e) { return !touches_only_added_lines(program, e); });
    }
    std::string name(to_string(method));
    totals[name] = found.size();
    explanations[name] = to_json(rank(std::move(found), program, o.top, method));
    timings[name + "_ms"] = ms;
    log << "[cfex] " << name << ": " << totals[name] << " explanations\n";
  };
  if (want_cfex) {
    auto t = Clock::now();
    auto found = run_cfex(program, adapters, cfg);
    emit(Method::CFEX, std::move(found), ms_since(t));
  }
  if (want_sedc) {
    auto t = Clock::now();
    auto found = run_sedc(program, *adapters.classifier, cfg);
    emit(Method::SEDC, std::move(found), ms_since(t));
  }

  std::string stamp = timestamp_utc();
  json doc{{"tool", "cfex"},
           {"schema_version", 1},
           {"diff", a.diff},
           {"timestamp", stamp},
           {"num_tokens", program.size()},
           {"num_groups", program.groups().size()},
           {"original_prediction", {{"label", original.label}, {"score", original.score}}},
           {"totals", totals},
           {"explanations", explanations}};
  write_text(a.out, doc.dump(2) + "\n");

  fs::path manifest_path = a.manifest;
  if (manifest_path.empty()) {
    manifest_path = fs::path(a.out);
    manifest_path.replace_extension(".manifest.json");
  }
  json config = options_json(o, cfg);
  config["method"] = a.method;
  config["added_lines_only"] = a.added_lines_only;
  json manifest{{"command", "explain"},
                {"argv", argv},
                {"timestamp", stamp},
                {"diff", a.diff},
                {"output", a.out},
                {"config", config},
                {"classifier", adapters.classifier->identity()},
                {"filler", adapters.filler ? json(adapters.filler->identity()) : json()},
                {"timings", timings}};
  write_text(manifest_path, manifest.dump(2) + "\n");
  log << "[cfex] wrote " << a.out << " and " << manifest_path.string() << "\n";
  return kOk;
}

// --------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string corpus_dir;
  std::string rationale_dir;
  std::string out_dir = "report";
  std::string overlap = "explanation";
};

int cmd_evaluate(const Options& o, const EvaluateArgs& a, std::ostream& log) {
  SearchConfig cfg = effective_search(o);
  KeywordSet keywords = keywords_for(o);
  if (!fs::is_directory(a.corpus_dir)) throw ConfigError("corpus directory not found: " + a.corpus_dir);
  std::vector<fs::path> diffs;
  for (const auto& entry : fs::directory_iterator(a.corpus_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".diff") diffs.push_back(entry.path());
  }
  std::sort(diffs.begin(), diffs.end());
  if (diffs.empty()) throw ConfigError("no .diff files in " + a.corpus_dir);
  auto denominator = a.overlap == "rationale" ? OverlapDenominator::Rationale : OverlapDenominator::Explanation;

  AdapterFactory factory(o, log);
  std::vector<ComparisonOutcome> outcomes;
  for (const fs::path& diff_path : diffs) {
    std::string id = diff_path.stem().string();
    fs::path rationale_path = fs::path(a.rationale_dir) / (id + ".json");
    if (!fs::exists(rationale_path)) {
      log << "warning: no rationale for " << id << "; skipped\n";
      continue;
    }
    Rationale rationale;
    try {
      rationale = read_rationale(rationale_path);
    } catch (const Error& e) {
      log << "warning: " << e.what() << "; " << id << " skipped\n";
      continue;
    }
    rationale.diff_id = id;
    TokenizedProgram program = load_program(diff_path, keywords);
    if (!rationale.attributed_indices.empty() &&
        *rationale.attributed_indices.rbegin() >= static_cast<int>(program.size())) {
      log << "warning: rationale for " << id << " references token " << *rationale.attributed_indices.rbegin()
          << " but the diff has " << program.size() << " tokens; skipped\n";
      continue;
    }
    auto adapters = factory.make(diff_path, true, keywords);
    auto cfex = rank(run_cfex(program, adapters, cfg), program, o.top, Method::CFEX);
    auto sedc = rank(run_sedc(program, *adapters.classifier, cfg), program, o.top, Method::SEDC);
    outcomes.push_back(decide_win(cfex, sedc, rationale, static_cast<int>(program.size()), denominator));
    log << "[cfex] " << id << ": CFEX " << to_string(outcomes.back().first.verdict) << ", SEDC "
        << to_string(outcomes.back().second.verdict) << "\n";
  }
  if (outcomes.empty()) throw ConfigError("no diff could be evaluated");

  Report report = report_table(outcomes);
  report.json["config"] = options_json(o, cfg);
  report.json["config"]["overlap"] = a.overlap;
  write_text(fs::path(a.out_dir) / "report.md", report.markdown);
  write_text(fs::path(a.out_dir) / "report.json", report.json.dump(2) + "\n");
  log << "[cfex] wrote " << (fs::path(a.out_dir) / "report.md").string() << "\n";
  return kOk;
}

// ----------------------------------------------------------------- oracle

struct OracleArgs {
  std::string instance;
  int oracle_size = 2;
};

std::string describe(const Substitution& s) {
  std::string out = "{";
  for (const auto& [gid, text] : s) {
    if (out.size() > 1) out += ", ";
    out += std::to_string(gid) + "->" + text;
  }
  return out + "}";
}

int cmd_oracle(Options o, const OracleArgs& a, std::ostream& out, std::ostream& log) {
  SearchConfig cfg = effective_search(o);
  KeywordSet keywords = keywords_for(o);
  TokenizedProgram program = load_program(a.instance, keywords);
  AdapterFactory factory(o, log);
  auto adapters = factory.make(a.instance, true, keywords);

  std::set<Substitution> oracle;
  try {
    oracle = brute_force_oracle(program, *adapters.classifier, *adapters.filler, a.oracle_size, cfg.mlm_k);
  } catch (const TooLarge& e) {
    throw ConfigError(e.what());
  } catch (const InvalidParams& e) {
    throw ConfigError(e.what());
  }
  std::set<Substitution> found;
  for (const auto& e : run_cfex(program, adapters, cfg)) found.insert(e.substitution());

  std::vector<Substitution> only_oracle, only_search;
  std::set_difference(oracle.begin(), oracle.end(), found.begin(), found.end(), std::back_inserter(only_oracle));
  std::set_difference(found.begin(), found.end(), oracle.begin(), oracle.end(), std::back_inserter(only_search));
  out << "oracle (size <= " << a.oracle_size << "): " << oracle.size() << " substitutions\n";
  out << "search (size <= " << cfg.max_explanation_size << "): " << found.size() << " substitutions\n";
  for (const auto& s : only_oracle) out << "only-in-oracle " << describe(s) << "\n";
  for (const auto& s : only_search) out << "only-in-search " << describe(s) << "\n";
  bool equal = only_oracle.empty() && only_search.empty();
  out << (equal ? "MATCH" : "MISMATCH") << "\n";
  return equal ? kOk : kOracleMismatch;
}

// ------------------------------------------------------------- gen-corpus

struct GenArgs {
  std::string out_dir;
  std::string rationale_dir;
  int count = 3;
  std::uint64_t seed = 1;
  int tokens = 50;
  int triggers = 1;
  bool cycle_triggers = false;
};

int cmd_gen_corpus(const GenArgs& a, std::ostream& log) {
  fs::path rationale_dir = a.rationale_dir.empty() ? fs::path(a.out_dir) / "rationales" : fs::path(a.rationale_dir);
  for (int i = 0; i < a.count; ++i) {
    int n_triggers = a.cycle_triggers ? 1 + i % 3 : a.triggers;
    PlantedInstance inst;
    try {
      inst = generate_instance(a.seed + static_cast<std::uint64_t>(i), a.tokens, n_triggers);
    } catch (const InvalidParams& e) {
      throw ConfigError(e.what());
    }
    char id[32];
    std::snprintf(id, sizeof id, "instance_%03d", i);
    write_instance(a.out_dir, id, inst);
    TokenizedProgram program = tokenize(inst.diff);
    write_text(rationale_dir / (std::string(id) + ".json"), to_json(inst.rationale(program, id)).dump(2) + "\n");
  }
  log << "[cfex] wrote " << a.count << " instances to " << a.out_dir << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& log) {
  CLI::App app{"cfex: counterfactual explanations for black-box code classifiers"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML config file; command-line flags take precedence");

  Options opts;

  ExplainArgs explain_args;
  auto* explain = app.add_subcommand("explain", "explain one diff's prediction");
  explain->add_option("diff", explain_args.diff, "diff file")->required();
  explain->add_option("-o,--out", explain_args.out, "explanation JSON output")->required();
  explain->add_option("--manifest", explain_args.manifest, "run manifest (default: <out>.manifest.json)");
  explain->add_option("--method", explain_args.method, "cfex | sedc | both")
      ->check(CLI::IsMember({"cfex", "sedc", "both"}))
      ->capture_default_str();
  explain->add_flag("--added-lines-only", explain_args.added_lines_only,
                    "keep only explanations that touch added lines exclusively");
  add_adapter_options(explain, opts);
  add_search_options(explain, opts);

  EvaluateArgs eval_args;
  auto* evaluate = app.add_subcommand("evaluate", "compare CFEX and SEDC against rationales");
  evaluate->add_option("--corpus", eval_args.corpus_dir, "directory of .diff files")->required();
  evaluate->add_option("--rationales", eval_args.rationale_dir, "directory of <id>.json rationales")->required();
  evaluate->add_option("--out-dir", eval_args.out_dir, "where report.md and report.json go")->capture_default_str();
  evaluate->add_option("--overlap", eval_args.overlap, "alignment denominator: explanation | rationale")
      ->check(CLI::IsMember({"explanation", "rationale"}))
      ->capture_default_str();
  add_adapter_options(evaluate, opts);
  add_search_options(evaluate, opts);

  OracleArgs oracle_args;
  auto* oracle = app.add_subcommand("oracle", "check search results against exhaustive enumeration");
  oracle->add_option("instance", oracle_args.instance, "instance diff (sidecar next to it)")->required();
  oracle->add_option("--oracle-size", oracle_args.oracle_size, "oracle subset size (1 or 2)")->capture_default_str();
  add_adapter_options(oracle, opts);
  add_search_options(oracle, opts);

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen-corpus", "write planted-culprit instances and rationales");
  gen->add_option("-o,--out", gen_args.out_dir, "output directory")->required();
  gen->add_option("--rationales", gen_args.rationale_dir, "rationale directory (default <out>/rationales)");
  gen->add_option("--count", gen_args.count, "number of instances")->capture_default_str();
  gen->add_option("--seed", gen_args.seed, "seed of the first instance")->capture_default_str();
  gen->add_option("--tokens", gen_args.tokens, "approximate tokens per diff")->capture_default_str();
  gen->add_option("--triggers", gen_args.triggers, "trigger groups per instance (1-3)")->capture_default_str();
  gen->add_flag("--cycle-triggers", gen_args.cycle_triggers, "cycle trigger counts 1,2,3");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    log << "error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (explain->parsed()) return cmd_explain(opts, explain_args, args, log);
    if (evaluate->parsed()) return cmd_evaluate(opts, eval_args, log);
    if (oracle->parsed()) {
      // oracle only enumerates pairs, so default the search to the same cap
      if (oracle->get_option("--max-size")->count() == 0) opts.search.max_explanation_size = 2;
      return cmd_oracle(opts, oracle_args, out, log);
    }
    if (gen->parsed()) return cmd_gen_corpus(gen_args, log);
  } catch (const AdapterUnavailable& e) {
    log << "error: adapter unreachable: " << e.what() << "\n";
    return kAdapterUnreachable;
  } catch (const MalformedResponse& e) {
    log << "error: adapter returned a malformed response: " << e.what() << "\n";
    return kAdapterUnreachable;
  } catch (const EmptyInput& e) {
    log << "error: parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    log << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace cfex::cli
