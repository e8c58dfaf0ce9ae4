#pragma once

// Small hand-checkable adapters shared by the test binaries.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cfex/diff.hpp"
#include "cfex/model.hpp"

namespace cfex::testing {

class ConstantClassifier final : public Classifier {
 public:
  explicit ConstantClassifier(double score) : score_(score) {}
  Prediction predict(std::span<const std::string>) const override { return Prediction::from_score(score_, 0.5); }
  std::string identity() const override { return "constant"; }

 private:
  double score_;
};

/// Offers the same word list for every masked consistency group. Joint
/// candidates enumerate the word choices per group in lexicographic order,
/// with uniform likelihood.
class VocabFiller final : public MaskFiller {
 public:
  explicit VocabFiller(std::vector<std::string> words) : words_(std::move(words)) {}

  std::vector<FillCandidate> fill_mask(const FillRequest& request) const override {
    ++calls;
    // one slot per tie set (or per untied position)
    std::vector<std::vector<int>> slots = request.tied_positions;
    for (int p : request.mask_positions) {
      bool tied = std::any_of(slots.begin(), slots.end(),
                              [&](const auto& s) { return std::find(s.begin(), s.end(), p) != s.end(); });
      if (!tied) slots.push_back({p});
    }
    std::vector<FillCandidate> out;
    std::vector<std::size_t> pick(slots.size(), 0);
    double like = 1.0;
    for (std::size_t i = 0; i < slots.size(); ++i) like /= static_cast<double>(words_.size());
    while (static_cast<int>(out.size()) < request.k) {
      std::map<int, std::string> at;
      for (std::size_t s = 0; s < slots.size(); ++s) {
        for (int p : slots[s]) at[p] = words_[pick[s]];
      }
      FillCandidate c;
      for (int p : request.mask_positions) c.replacements.push_back(at[p]);
      c.likelihood = like;
      out.push_back(std::move(c));
      std::size_t s = slots.size();
      while (s > 0) {
        --s;
        if (++pick[s] < words_.size()) break;
        pick[s] = 0;
        if (s == 0) return out;
      }
      if (slots.empty()) break;
    }
    return out;
  }
  std::string identity() const override { return "vocab"; }

  mutable std::atomic<int> calls{0};

 private:
  std::vector<std::string> words_;
};

inline TokenizedProgram program_of(std::string_view diff_text) { return tokenize(parse_diff(diff_text)); }

/// Group id of the identifier `text`; -1 when absent.
inline int group_named(const TokenizedProgram& program, std::string_view text) {
  for (const auto& g : program.groups()) {
    if (g.canonical_text == text && program.tokens()[static_cast<std::size_t>(g.member_indices[0])].kind ==
                                        TokenKind::Identifier) {
      return g.group_id;
    }
  }
  return -1;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::filesystem::path data_dir() { return CFEX_TEST_DATA_DIR; }

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("cfex_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace cfex::testing
