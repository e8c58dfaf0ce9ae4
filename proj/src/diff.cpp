#include "cfex/diff.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <unordered_map>

#include "cfex/error.hpp"

namespace cfex {

std::string_view to_string(LineKind kind) {
  switch (kind) {
    case LineKind::Context: return "Context";
    case LineKind::Added: return "Added";
    case LineKind::Deleted: return "Deleted";
  }
  return "Context";
}

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "Identifier";
    case TokenKind::Keyword: return "Keyword";
    case TokenKind::Number: return "Number";
    case TokenKind::String: return "String";
    case TokenKind::Operator: return "Operator";
    case TokenKind::Punct: return "Punct";
  }
  return "Punct";
}

std::size_t Diff::count(LineKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(lines.begin(), lines.end(), [kind](const DiffLine& l) { return l.kind == kind; }));
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }
bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$';
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }
bool is_quote(char c) { return c == '"' || c == '\'' || c == '`'; }

// Longest first so a linear scan implements maximal munch.
constexpr std::array<std::string_view, 33> kOperators = {
    ">>>=", "<<=", ">>=", "===", "!==", "...", "**=", "<=>", "->", "=>", "::",
    "++",   "--",  "&&",  "||",  "==",  "!=",  "<=",  ">=",  "+=", "-=", "*=",
    "/=",   "%=",  "&=",  "|=",  "^=",  "<<",  ">>",  "??",  "?.", "**", "//"};

constexpr std::string_view kSingleOperators = "+-*/%=<>!&|^~?:.";
constexpr std::string_view kPunct = "()[]{},;";

std::vector<ConsistencyGroup> build_groups(const std::vector<Token>& tokens) {
  std::vector<ConsistencyGroup> groups;
  std::unordered_map<std::string, int> by_text;
  for (const Token& token : tokens) {
    if (token.kind == TokenKind::Identifier) {
      auto [it, inserted] = by_text.try_emplace(token.text, static_cast<int>(groups.size()));
      if (inserted) {
        groups.push_back({it->second, {}, token.text});
      }
      groups[static_cast<std::size_t>(it->second)].member_indices.push_back(token.index);
    } else {
      int id = static_cast<int>(groups.size());
      groups.push_back({id, {token.index}, token.text});
    }
  }
  return groups;
}

}  // namespace

TokenizedProgram::TokenizedProgram(std::vector<Token> tokens, std::vector<ConsistencyGroup> groups)
    : tokens_(std::move(tokens)), groups_(std::move(groups)), group_of_(tokens_.size(), -1) {
  for (const ConsistencyGroup& g : groups_) {
    for (int idx : g.member_indices) {
      group_of_[static_cast<std::size_t>(idx)] = g.group_id;
    }
  }
}

const ConsistencyGroup& TokenizedProgram::group(int group_id) const {
  if (!has_group(group_id)) throw UnknownGroup(group_id);
  return groups_[static_cast<std::size_t>(group_id)];
}

bool TokenizedProgram::has_group(int group_id) const {
  return group_id >= 0 && static_cast<std::size_t>(group_id) < groups_.size();
}

std::vector<std::string> TokenizedProgram::texts() const {
  std::vector<std::string> out;
  out.reserve(tokens_.size());
  for (const Token& t : tokens_) out.push_back(t.text);
  return out;
}

const KeywordSet& default_keywords() {
  static const KeywordSet kKeywords = {
      "abstract", "async",    "await",     "bool",      "break",   "case",      "catch",
      "char",     "class",    "const",     "constexpr", "continue", "default",  "delete",
      "do",       "double",   "else",      "enum",      "export",  "extends",   "false",
      "final",    "finally",  "float",     "for",       "foreach", "function",  "goto",
      "if",       "implements", "import",  "instanceof", "int",    "interface", "let",
      "long",     "namespace", "new",      "null",      "nullptr", "package",   "private",
      "protected", "public",  "return",    "short",     "signed",  "sizeof",    "static",
      "struct",   "super",    "switch",    "template",  "this",    "throw",     "true",
      "try",      "typedef",  "typeof",    "union",     "unsigned", "using",    "var",
      "virtual",  "void",     "volatile",  "while",     "yield"};
  return kKeywords;
}

KeywordSet load_keywords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read keyword file: " + path);
  KeywordSet out;
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t\r");
    out.insert(line.substr(b, e - b + 1));
  }
  return out;
}

Diff parse_diff(std::string_view text, std::string source_name) {
  if (text.empty()) throw EmptyInput();
  Diff diff;
  diff.source_name = std::move(source_name);
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);

    DiffLine line;
    line.line_no = ++line_no;
    if (!raw.empty() && raw.front() == '+') {
      line.kind = LineKind::Added;
      raw.remove_prefix(1);
    } else if (!raw.empty() && raw.front() == '-') {
      line.kind = LineKind::Deleted;
      raw.remove_prefix(1);
    } else {
      line.kind = LineKind::Context;
      if (!raw.empty() && raw.front() == ' ') raw.remove_prefix(1);
    }
    line.text = std::string(raw);
    diff.lines.push_back(std::move(line));
  }
  return diff;
}

std::vector<Lexeme> lex_line(std::string_view line, const KeywordSet& keywords) {
  std::vector<Lexeme> out;
  std::size_t i = 0;
  const std::size_t n = line.size();

  char open_quote = 0;  // non-zero while inside a string literal
  std::string pending;
  int pending_col = 0;
  auto flush_string = [&] {
    if (!pending.empty()) out.push_back({std::move(pending), TokenKind::String, pending_col});
    pending.clear();
  };

  while (i < n) {
    char c = line[i];
    int col = static_cast<int>(i) + 1;

    if (open_quote != 0) {
      if (is_space(c)) {
        flush_string();
        ++i;
        continue;
      }
      if (pending.empty()) pending_col = col;
      if (c == '\\' && i + 1 < n && !is_space(line[i + 1])) {
        pending += line.substr(i, 2);
        i += 2;
        continue;
      }
      pending += c;
      ++i;
      if (c == open_quote) {
        open_quote = 0;
        flush_string();
      }
      continue;
    }

    if (is_space(c)) {
      ++i;
      continue;
    }
    if (is_quote(c)) {
      open_quote = c;
      pending_col = col;
      pending = std::string(1, c);
      ++i;
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t j = i + 1;
      while (j < n && is_ident_char(line[j])) ++j;
      std::string word(line.substr(i, j - i));
      TokenKind kind = keywords.count(word) ? TokenKind::Keyword : TokenKind::Identifier;
      out.push_back({std::move(word), kind, col});
      i = j;
      continue;
    }
    if (is_digit(c) || (c == '.' && i + 1 < n && is_digit(line[i + 1]))) {
      std::size_t j = i + 1;
      while (j < n && (is_ident_char(line[j]) || line[j] == '.')) ++j;
      out.push_back({std::string(line.substr(i, j - i)), TokenKind::Number, col});
      i = j;
      continue;
    }
    bool matched = false;
    for (std::string_view op : kOperators) {
      if (line.substr(i, op.size()) == op) {
        out.push_back({std::string(op), TokenKind::Operator, col});
        i += op.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (kSingleOperators.find(c) != std::string_view::npos) {
      out.push_back({std::string(1, c), TokenKind::Operator, col});
      ++i;
      continue;
    }
    if (kPunct.find(c) != std::string_view::npos) {
      out.push_back({std::string(1, c), TokenKind::Punct, col});
      ++i;
      continue;
    }
    // Unknown byte; keep a UTF-8 sequence together.
    std::size_t j = i + 1;
    if (static_cast<unsigned char>(c) >= 0xC0) {
      while (j < n && (static_cast<unsigned char>(line[j]) & 0xC0) == 0x80) ++j;
    }
    out.push_back({std::string(line.substr(i, j - i)), TokenKind::Punct, col});
    i = j;
  }
  flush_string();
  return out;
}

TokenizedProgram tokenize(const Diff& diff, const KeywordSet& keywords) {
  std::vector<Token> tokens;
  for (const DiffLine& line : diff.lines) {
    for (Lexeme& lx : lex_line(line.text, keywords)) {
      Token t;
      t.index = static_cast<int>(tokens.size());
      t.text = std::move(lx.text);
      t.kind = lx.kind;
      t.line_no = line.line_no;
      t.col = lx.col;
      t.line_kind = line.kind;
      tokens.push_back(std::move(t));
    }
  }
  auto groups = build_groups(tokens);
  return TokenizedProgram(std::move(tokens), std::move(groups));
}

bool is_valid_replacement(std::string_view text) {
  return !text.empty() && std::none_of(text.begin(), text.end(), is_space);
}

TokenizedProgram apply_substitution(const TokenizedProgram& program, const Substitution& subst) {
  for (const auto& [gid, text] : subst) {
    if (!program.has_group(gid)) throw UnknownGroup(gid);
    if (!is_valid_replacement(text)) throw InvalidReplacement(text);
  }
  std::vector<Token> tokens = program.tokens();
  std::vector<ConsistencyGroup> groups = program.groups();
  for (const auto& [gid, text] : subst) {
    auto& g = groups[static_cast<std::size_t>(gid)];
    g.canonical_text = text;
    for (int idx : g.member_indices) tokens[static_cast<std::size_t>(idx)].text = text;
  }
  return TokenizedProgram(std::move(tokens), std::move(groups));
}

TokenizedProgram remove_groups(const TokenizedProgram& program, const std::set<int>& group_ids) {
  for (int gid : group_ids) {
    if (!program.has_group(gid)) throw UnknownGroup(gid);
  }
  std::vector<Token> tokens;
  tokens.reserve(program.size());
  for (const Token& t : program.tokens()) {
    if (group_ids.count(program.group_of(t.index))) continue;
    Token copy = t;
    copy.index = static_cast<int>(tokens.size());
    tokens.push_back(std::move(copy));
  }
  auto groups = build_groups(tokens);
  return TokenizedProgram(std::move(tokens), std::move(groups));
}

std::string render(const TokenizedProgram& program) {
  std::string out;
  int current_line = 0;
  bool line_has_token = false;
  for (const Token& t : program.tokens()) {
    if (t.line_no != current_line) {
      if (current_line != 0) out += '\n';
      // Keep line numbers stable across a round trip.
      for (int blank = current_line + 1; blank < t.line_no; ++blank) out += '\n';
      current_line = t.line_no;
      line_has_token = false;
      switch (t.line_kind) {
        case LineKind::Added: out += '+'; break;
        case LineKind::Deleted: out += '-'; break;
        case LineKind::Context: out += ' '; break;
      }
    }
    if (line_has_token) out += ' ';
    out += t.text;
    line_has_token = true;
  }
  if (!out.empty()) out += '\n';
  return out;
}

}  // namespace cfex
