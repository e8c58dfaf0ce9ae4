#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cfex {

enum class LineKind { Context, Added, Deleted };
enum class TokenKind { Identifier, Keyword, Number, String, Operator, Punct };

std::string_view to_string(LineKind kind);
std::string_view to_string(TokenKind kind);

struct DiffLine {
  LineKind kind = LineKind::Context;
  std::string text;
  int line_no = 1;  // position within the diff text, 1-based
};

/// A parsed code change. Line numbers strictly increase.
struct Diff {
  std::vector<DiffLine> lines;
  std::string source_name;

  std::size_t count(LineKind kind) const;
};

struct Token {
  int index = 0;
  std::string text;
  TokenKind kind = TokenKind::Punct;
  int line_no = 1;
  int col = 1;
  LineKind line_kind = LineKind::Context;
};

/// All occurrences of one identifier, or a single non-identifier token.
struct ConsistencyGroup {
  int group_id = 0;
  std::vector<int> member_indices;  // sorted ascending
  std::string canonical_text;
};

/// Indexed token sequence plus its consistency groups. Immutable once built;
/// group ids follow first-occurrence order so they are stable for a given diff.
class TokenizedProgram {
 public:
  TokenizedProgram() = default;
  TokenizedProgram(std::vector<Token> tokens, std::vector<ConsistencyGroup> groups);

  const std::vector<Token>& tokens() const { return tokens_; }
  const std::vector<ConsistencyGroup>& groups() const { return groups_; }
  const ConsistencyGroup& group(int group_id) const;
  bool has_group(int group_id) const;
  int group_of(int token_index) const { return group_of_[static_cast<std::size_t>(token_index)]; }

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  /// Token texts in index order; the only thing a classifier sees.
  std::vector<std::string> texts() const;

 private:
  std::vector<Token> tokens_;
  std::vector<ConsistencyGroup> groups_;
  std::vector<int> group_of_;
};

using KeywordSet = std::set<std::string, std::less<>>;

/// Common C-family keywords (C, C++, Java, JavaScript, PHP/Hack overlap).
const KeywordSet& default_keywords();

/// One keyword per line; blank lines and lines starting with '#' are skipped.
KeywordSet load_keywords(const std::string& path);

/// Splits `text` on line breaks. "+" marks added lines, "-" deleted lines,
/// everything else is context (a single leading space is stripped).
/// Throws EmptyInput when there are no lines.
Diff parse_diff(std::string_view text, std::string source_name = {});

struct Lexeme {
  std::string text;
  TokenKind kind;
  int col;  // 1-based
};

/// Lexes one line of code. Quoted string literals are split at whitespace
/// into several String lexemes so no lexeme carries whitespace.
std::vector<Lexeme> lex_line(std::string_view line, const KeywordSet& keywords = default_keywords());

TokenizedProgram tokenize(const Diff& diff, const KeywordSet& keywords = default_keywords());

using Substitution = std::map<int, std::string>;  // group id -> replacement text

/// Rewrites every member of each substituted group. Indices and grouping are
/// preserved. Throws UnknownGroup or InvalidReplacement.
TokenizedProgram apply_substitution(const TokenizedProgram& program, const Substitution& subst);

/// Excises every member token of the given groups and re-packs indices.
/// Throws UnknownGroup.
TokenizedProgram remove_groups(const TokenizedProgram& program, const std::set<int>& group_ids);

/// Renders the program back into diff text, one space between tokens.
/// Tokenizing the result reproduces the same token stream.
std::string render(const TokenizedProgram& program);

bool is_valid_replacement(std::string_view text);

}  // namespace cfex
